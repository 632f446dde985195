#include "sfsort/mot_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string_view>

namespace sfsort {

namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

double parse_double(std::string_view field, const std::filesystem::path& path, int line_no) {
    field = trim(field);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        std::ostringstream msg;
        msg << path.string() << ":" << line_no << ": malformed numeric field '" << field << "'";
        throw std::runtime_error(msg.str());
    }
    return value;
}

std::string format_double(double value) {
    char buffer[32];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    return out;
}

struct RawRow {
    int frame;
    int id;
    BoundingBox box;
    double conf;
};

// Shared row parser for det/gt/result files. Gt rows may carry the
// consider flag and class in columns 7..8.
std::vector<RawRow> read_rows(const std::filesystem::path& path, bool skip_unconsidered) {
    std::ifstream in = open_input(path);
    std::vector<RawRow> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view view = trim(line);
        if (view.empty()) {
            continue;
        }
        const auto fields = split_csv(view);
        if (fields.size() < 7) {
            std::ostringstream msg;
            msg << path.string() << ":" << line_no << ": expected at least 7 fields, got "
                << fields.size();
            throw std::runtime_error(msg.str());
        }
        RawRow row;
        row.frame = static_cast<int>(parse_double(fields[0], path, line_no));
        row.id = static_cast<int>(parse_double(fields[1], path, line_no));
        const double left = parse_double(fields[2], path, line_no);
        const double top = parse_double(fields[3], path, line_no);
        const double width = parse_double(fields[4], path, line_no);
        const double height = parse_double(fields[5], path, line_no);
        row.conf = parse_double(fields[6], path, line_no);
        if (skip_unconsidered && row.conf == 0.0) {
            continue;
        }
        if (width < 0.0 || height < 0.0) {
            std::ostringstream msg;
            msg << path.string() << ":" << line_no << ": negative box extent " << width << "x"
                << height;
            throw std::runtime_error(msg.str());
        }
        row.box = BoundingBox::from_tlwh(left, top, width, height);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

FrameDetections read_detections(const std::filesystem::path& path, bool rescale) {
    const std::vector<RawRow> rows = read_rows(path, false);
    double max_score = 0.0;
    for (const RawRow& row : rows) {
        max_score = std::max(max_score, row.conf);
    }
    const double scale = (rescale && max_score > 1.0) ? max_score : 1.0;
    FrameDetections detections;
    for (const RawRow& row : rows) {
        detections[row.frame].push_back({row.box, row.conf / scale});
    }
    return detections;
}

FrameEntries read_ground_truth(const std::filesystem::path& path) {
    FrameEntries entries;
    for (const RawRow& row : read_rows(path, true)) {
        entries[row.frame].push_back({row.id, row.box});
    }
    return entries;
}

FrameEntries read_results(const std::filesystem::path& path) {
    FrameEntries entries;
    for (const RawRow& row : read_rows(path, false)) {
        entries[row.frame].push_back({row.id, row.box, row.conf});
    }
    return entries;
}

std::vector<TrackPtr> entries_to_tracks(const FrameEntries& entries) {
    std::map<int, std::vector<Observation>> by_id;
    for (const auto& [frame, list] : entries) {
        for (const GtEntry& entry : list) {
            by_id[entry.id].push_back({frame, entry.box, entry.score, entry.score == 0.0});
        }
    }
    std::vector<TrackPtr> tracks;
    for (auto& [id, history] : by_id) {
        auto track = std::make_shared<Track>(id, history.front().frame, history.front().box,
                                             history.front().score);
        track->set_history(std::move(history));
        tracks.push_back(track);
    }
    return tracks;
}

void write_results(const std::filesystem::path& path, const std::vector<TrackPtr>& tracks) {
    struct Line {
        int frame;
        int id;
        const Observation* obs;
    };
    std::vector<Line> lines;
    for (const TrackPtr& track : tracks) {
        for (const Observation& obs : track->history()) {
            lines.push_back({obs.frame, track->id(), &obs});
        }
    }
    std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
        return std::tie(a.frame, a.id) < std::tie(b.frame, b.id);
    });

    std::ofstream out = open_output(path);
    for (const Line& line : lines) {
        const BoundingBox& box = line.obs->box;
        out << line.frame << ',' << line.id << ',' << format_double(box.x1) << ','
            << format_double(box.y1) << ',' << format_double(box.width()) << ','
            << format_double(box.height()) << ',' << format_double(line.obs->score)
            << ",-1,-1,-1\n";
    }
}

void write_entries(const std::filesystem::path& path, const FrameEntries& entries) {
    std::ofstream out = open_output(path);
    for (const auto& [frame, list] : entries) {
        for (const GtEntry& entry : list) {
            const BoundingBox& box = entry.box;
            out << frame << ',' << entry.id << ',' << format_double(box.x1) << ','
                << format_double(box.y1) << ',' << format_double(box.width()) << ','
                << format_double(box.height()) << ",1,1,1\n";
        }
    }
}

void write_detections(const std::filesystem::path& path, const FrameDetections& detections) {
    std::ofstream out = open_output(path);
    for (const auto& [frame, list] : detections) {
        for (const Detection& det : list) {
            const BoundingBox& box = det.box;
            out << frame << ",-1," << format_double(box.x1) << ',' << format_double(box.y1) << ','
                << format_double(box.width()) << ',' << format_double(box.height()) << ','
                << format_double(det.score) << ",-1,-1,-1\n";
        }
    }
}

SequenceInfo read_seqinfo(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    std::map<std::string, std::string> values;
    std::string line;
    while (std::getline(in, line)) {
        const std::string_view view = trim(line);
        if (view.empty() || view.front() == '[' || view.front() == ';' || view.front() == '#') {
            continue;
        }
        const std::size_t eq = view.find('=');
        if (eq == std::string_view::npos) {
            continue;
        }
        values[std::string(trim(view.substr(0, eq)))] = std::string(trim(view.substr(eq + 1)));
    }

    const auto require = [&](const std::string& key) -> const std::string& {
        const auto it = values.find(key);
        if (it == values.end()) {
            throw std::runtime_error(path.string() + ": missing key '" + key + "'");
        }
        return it->second;
    };

    SequenceInfo info;
    info.meta.frame_rate = std::stod(require("frameRate"));
    info.meta.width = std::stod(require("imWidth"));
    info.meta.height = std::stod(require("imHeight"));
    if (const auto it = values.find("seqLength"); it != values.end()) {
        info.seq_length = std::stoi(it->second);
    }
    if (const auto it = values.find("name"); it != values.end()) {
        info.name = it->second;
    }
    return info;
}

void write_seqinfo(const std::filesystem::path& path, const SequenceInfo& info) {
    std::ofstream out = open_output(path);
    out << "[Sequence]\n";
    if (!info.name.empty()) {
        out << "name=" << info.name << '\n';
    }
    out << "frameRate=" << format_double(info.meta.frame_rate) << '\n';
    out << "seqLength=" << info.seq_length << '\n';
    out << "imWidth=" << format_double(info.meta.width) << '\n';
    out << "imHeight=" << format_double(info.meta.height) << '\n';
}

std::array<std::vector<KeypointMatch>, 5> read_keypoints(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    std::array<std::vector<KeypointMatch>, 5> samples;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view view = trim(line);
        if (view.empty()) {
            continue;
        }
        const auto fields = split_csv(view);
        if (fields.size() != 5) {
            std::ostringstream msg;
            msg << path.string() << ":" << line_no << ": expected 5 fields, got " << fields.size();
            throw std::runtime_error(msg.str());
        }
        const int sample = static_cast<int>(parse_double(fields[0], path, line_no));
        if (sample < 0 || sample > 4) {
            std::ostringstream msg;
            msg << path.string() << ":" << line_no << ": sample_index " << sample
                << " outside 0..4";
            throw std::runtime_error(msg.str());
        }
        samples[static_cast<std::size_t>(sample)].push_back(
            {parse_double(fields[1], path, line_no), parse_double(fields[2], path, line_no),
             parse_double(fields[3], path, line_no), parse_double(fields[4], path, line_no)});
    }
    return samples;
}

namespace {

void check_frame_range(int frame, int seq_length, const std::filesystem::path& source) {
    if (frame < 1 || (seq_length > 0 && frame > seq_length)) {
        throw std::runtime_error(source.string() + ": frame " + std::to_string(frame) +
                                 " outside 1.." + std::to_string(seq_length));
    }
}

}  // namespace

SequenceBundle load_sequence_dir(const std::filesystem::path& dir, bool rescale) {
    SequenceBundle bundle;
    const SequenceInfo info = read_seqinfo(dir / "seqinfo.ini");
    bundle.name = info.name.empty() ? dir.filename().string() : info.name;
    bundle.meta = info.meta;
    bundle.seq_length = info.seq_length;

    const std::filesystem::path nested_det = dir / "det" / "det.txt";
    const std::filesystem::path flat_det = dir / "det.txt";
    bundle.detections = read_detections(
        std::filesystem::exists(nested_det) ? nested_det : flat_det, rescale);
    for (const auto& [frame, list] : bundle.detections) {
        check_frame_range(frame, bundle.seq_length, dir);
    }

    const std::filesystem::path nested_gt = dir / "gt" / "gt.txt";
    const std::filesystem::path flat_gt = dir / "gt.txt";
    const std::filesystem::path gt_path = std::filesystem::exists(nested_gt) ? nested_gt : flat_gt;
    if (std::filesystem::exists(gt_path)) {
        bundle.ground_truth = read_ground_truth(gt_path);
        for (const auto& [frame, list] : *bundle.ground_truth) {
            check_frame_range(frame, bundle.seq_length, dir);
        }
    }

    const std::filesystem::path keypoints_path = dir / "keypoints.csv";
    if (std::filesystem::exists(keypoints_path)) {
        bundle.keypoint_samples = read_keypoints(keypoints_path);
    }
    return bundle;
}

void write_keypoints(const std::filesystem::path& path,
                     const std::array<std::vector<KeypointMatch>, 5>& samples) {
    std::ofstream out = open_output(path);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        for (const KeypointMatch& match : samples[i]) {
            out << i << ',' << format_double(match.prev_x) << ',' << format_double(match.prev_y)
                << ',' << format_double(match.cur_x) << ',' << format_double(match.cur_y) << '\n';
        }
    }
}

}  // namespace sfsort

#include "sfsort/adaptation.hpp"

#include "sfsort/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sfsort {

namespace {

// Nearest integer, ties rounded up.
int round_frames(double value) {
    return static_cast<int>(std::floor(value + 0.5));
}

}  // namespace

TrackerConfig default_config(Profile profile) {
    TrackerConfig config;  // defaults are the MOT17 column
    if (profile == Profile::Mot20) {
        config.lth = 0.15;
        config.mth2 = 0.30;
        config.hth0 = 0.70;
        config.hth_m = 0.07;
        config.nth0 = 0.55;
        config.nth_m = 0.02;
        config.mth0 = 0.45;
        config.mth_m = 0.05;
        config.margin_horizontal = 0.10;
        config.margin_vertical = 0.15;
        config.timeout_central = 1.00;
        config.timeout_marginal = 0.50;
        config.cth = 0.15;
        config.cm = 1.5;
        config.cd1 = 0.5;
        config.cd2 = 0.5;
        config.cd3 = 0.5;
        config.cd4 = 0.5;
    }
    return config;
}

VideoParams derive_video_params(const TrackerConfig& config, const SceneMetadata& meta) {
    VideoParams params;
    params.central_timeout_frames = round_frames(config.timeout_central * meta.frame_rate);
    params.marginal_timeout_frames = round_frames(config.timeout_marginal * meta.frame_rate);
    params.hmargin_px = config.margin_horizontal * meta.width;
    params.vmargin_px = config.margin_vertical * meta.height;
    return params;
}

AdaptiveThresholds adaptive_thresholds(const TrackerConfig& config,
                                       std::span<const Detection> detections) {
    std::size_t n = 0;
    for (const Detection& det : detections) {
        if (det.score > config.cth) {
            ++n;
        }
    }
    return adaptive_thresholds_for_count(config, n);
}

AdaptiveThresholds adaptive_thresholds_for_count(const TrackerConfig& config,
                                                 std::size_t n_above_cth) {
    const double count = std::log10(static_cast<double>(std::max<std::size_t>(n_above_cth, 1)));
    AdaptiveThresholds t;
    t.hth = std::clamp(config.hth0 - config.hth_m * count, config.lth, 1.0);
    t.nth = std::clamp(config.nth0 + config.nth_m * count, 0.0, 1.0);
    t.mth1 = std::clamp(config.mth0 - config.mth_m * count, 0.0, 4.0 / 3.0);
    return t;
}

Profile parse_profile(const std::string& name) {
    if (name == "mot17") {
        return Profile::Mot17;
    }
    if (name == "mot20") {
        return Profile::Mot20;
    }
    throw std::invalid_argument("unknown profile: " + name);
}

namespace {

struct ConfigKey {
    const char* name;
    double TrackerConfig::* field;
};

constexpr ConfigKey kConfigKeys[] = {
    {"LTH", &TrackerConfig::lth},
    {"MTH2", &TrackerConfig::mth2},
    {"HTH0", &TrackerConfig::hth0},
    {"HTHm", &TrackerConfig::hth_m},
    {"NTH0", &TrackerConfig::nth0},
    {"NTHm", &TrackerConfig::nth_m},
    {"MTH0", &TrackerConfig::mth0},
    {"MTHm", &TrackerConfig::mth_m},
    {"HMargin", &TrackerConfig::margin_horizontal},
    {"VMargin", &TrackerConfig::margin_vertical},
    {"CTime", &TrackerConfig::timeout_central},
    {"MTime", &TrackerConfig::timeout_marginal},
    {"CTH", &TrackerConfig::cth},
    {"Cm", &TrackerConfig::cm},
    {"Cd1", &TrackerConfig::cd1},
    {"Cd2", &TrackerConfig::cd2},
    {"Cd3", &TrackerConfig::cd3},
    {"Cd4", &TrackerConfig::cd4},
    {"DepthThreshold", &TrackerConfig::depth_threshold},
    {"StationaryDisplacement", &TrackerConfig::stationary_displacement_px},
};

}  // namespace

void apply_config_entry(TrackerConfig& config, const std::string& key, double value) {
    for (const ConfigKey& entry : kConfigKeys) {
        if (key == entry.name) {
            config.*(entry.field) = value;
            return;
        }
    }
    throw std::invalid_argument("unknown config key: " + key);
}

TrackerConfig load_config_file(const std::string& path, TrackerConfig base) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file " + path);
    }
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected key = value");
        }
        const auto strip = [](std::string s) {
            const auto begin = s.find_first_not_of(" \t\r");
            const auto end = s.find_last_not_of(" \t\r");
            return begin == std::string::npos ? std::string() : s.substr(begin, end - begin + 1);
        };
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        try {
            apply_config_entry(base, key, std::stod(value));
        } catch (const std::invalid_argument&) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": bad entry '" +
                                     key + " = " + value + "'");
        }
    }
    return base;
}

std::string format_config(const TrackerConfig& config) {
    std::ostringstream out;
    for (const ConfigKey& entry : kConfigKeys) {
        out << entry.name << " = " << config.*(entry.field) << '\n';
    }
    return out.str();
}

}  // namespace sfsort

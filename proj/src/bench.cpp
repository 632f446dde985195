#include "sfsort/bench.hpp"

#include "sfsort/assignment.hpp"
#include "sfsort/geometry.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <unordered_map>

namespace sfsort {

namespace {

const std::vector<GtEntry> kNoEntries;

const std::vector<GtEntry>& entries_at(const FrameEntries& entries, int frame) {
    const auto it = entries.find(frame);
    return it == entries.end() ? kNoEntries : it->second;
}

}  // namespace

EvalReport evaluate(const FrameEntries& gt, const FrameEntries& results, double iou_threshold) {
    EvalReport report;

    std::vector<int> frames;
    for (const auto& [frame, _] : gt) {
        frames.push_back(frame);
    }
    for (const auto& [frame, _] : results) {
        frames.push_back(frame);
    }
    std::sort(frames.begin(), frames.end());
    frames.erase(std::unique(frames.begin(), frames.end()), frames.end());

    std::unordered_map<int, int> last_match;                 // gt id -> result id
    std::map<std::pair<int, int>, int> overlap_frames;       // (gt id, result id) -> frames
    long long total_gt = 0;
    long long total_res = 0;

    for (const int frame : frames) {
        const auto& gt_list = entries_at(gt, frame);
        const auto& res_list = entries_at(results, frame);
        total_gt += static_cast<long long>(gt_list.size());
        total_res += static_cast<long long>(res_list.size());
        report.gt_count += static_cast<int>(gt_list.size());

        // Identity-overlap counts feeding IDF1.
        for (const GtEntry& g : gt_list) {
            for (const GtEntry& r : res_list) {
                if (iou(g.box, r.box) >= iou_threshold) {
                    ++overlap_frames[{g.id, r.id}];
                }
            }
        }

        std::vector<bool> gt_taken(gt_list.size(), false);
        std::vector<bool> res_taken(res_list.size(), false);

        // Continuity rule: keep last frame's correspondence while it still
        // clears the threshold.
        for (std::size_t gi = 0; gi < gt_list.size(); ++gi) {
            const auto it = last_match.find(gt_list[gi].id);
            if (it == last_match.end()) {
                continue;
            }
            for (std::size_t ri = 0; ri < res_list.size(); ++ri) {
                if (res_taken[ri] || res_list[ri].id != it->second) {
                    continue;
                }
                if (iou(gt_list[gi].box, res_list[ri].box) >= iou_threshold) {
                    gt_taken[gi] = true;
                    res_taken[ri] = true;
                }
                break;
            }
        }

        // Assign the remainder by minimum 1 - IoU.
        std::vector<std::size_t> free_gt;
        std::vector<std::size_t> free_res;
        for (std::size_t gi = 0; gi < gt_list.size(); ++gi) {
            if (!gt_taken[gi]) {
                free_gt.push_back(gi);
            }
        }
        for (std::size_t ri = 0; ri < res_list.size(); ++ri) {
            if (!res_taken[ri]) {
                free_res.push_back(ri);
            }
        }
        if (!free_gt.empty() && !free_res.empty()) {
            Eigen::MatrixXd costs(static_cast<Eigen::Index>(free_gt.size()),
                                  static_cast<Eigen::Index>(free_res.size()));
            for (std::size_t i = 0; i < free_gt.size(); ++i) {
                for (std::size_t j = 0; j < free_res.size(); ++j) {
                    costs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                        1.0 - iou(gt_list[free_gt[i]].box, res_list[free_res[j]].box);
                }
            }
            const MatchResult assignment = solve(costs, 1.0 - iou_threshold);
            for (const auto& match : assignment.matches) {
                const GtEntry& g = gt_list[free_gt[static_cast<std::size_t>(match.row)]];
                const GtEntry& r = res_list[free_res[static_cast<std::size_t>(match.col)]];
                gt_taken[free_gt[static_cast<std::size_t>(match.row)]] = true;
                res_taken[free_res[static_cast<std::size_t>(match.col)]] = true;
                const auto it = last_match.find(g.id);
                if (it != last_match.end() && it->second != r.id) {
                    ++report.id_switches;
                }
                last_match[g.id] = r.id;
            }
        }

        for (std::size_t gi = 0; gi < gt_list.size(); ++gi) {
            if (!gt_taken[gi]) {
                ++report.false_negatives;
            }
        }
        for (std::size_t ri = 0; ri < res_list.size(); ++ri) {
            if (!res_taken[ri]) {
                ++report.false_positives;
            }
        }
    }

    const double denom = std::max<long long>(report.gt_count, 1);
    report.mota = 1.0 - (report.false_negatives + report.false_positives + report.id_switches) /
                            denom;

    // IDF1: optimal one-to-one identity correspondence maximizing the
    // number of co-occurring matched frames.
    std::vector<int> gt_ids;
    std::vector<int> res_ids;
    {
        std::unordered_map<int, bool> seen_gt;
        std::unordered_map<int, bool> seen_res;
        for (const auto& [frame, list] : gt) {
            for (const GtEntry& e : list) {
                if (!seen_gt[e.id]) {
                    seen_gt[e.id] = true;
                    gt_ids.push_back(e.id);
                }
            }
        }
        for (const auto& [frame, list] : results) {
            for (const GtEntry& e : list) {
                if (!seen_res[e.id]) {
                    seen_res[e.id] = true;
                    res_ids.push_back(e.id);
                }
            }
        }
        std::sort(gt_ids.begin(), gt_ids.end());
        std::sort(res_ids.begin(), res_ids.end());
    }

    long long idtp = 0;
    if (!gt_ids.empty() && !res_ids.empty()) {
        Eigen::MatrixXd costs(static_cast<Eigen::Index>(gt_ids.size()),
                              static_cast<Eigen::Index>(res_ids.size()));
        for (std::size_t i = 0; i < gt_ids.size(); ++i) {
            for (std::size_t j = 0; j < res_ids.size(); ++j) {
                const auto it = overlap_frames.find({gt_ids[i], res_ids[j]});
                costs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    it == overlap_frames.end() ? 0.0 : -static_cast<double>(it->second);
            }
        }
        const MatchResult assignment = solve(costs, -0.5);
        for (const auto& match : assignment.matches) {
            idtp += static_cast<long long>(-match.cost);
        }
    }
    const long long id_denom = total_gt + total_res;
    report.idf1 = id_denom > 0 ? 2.0 * static_cast<double>(idtp) / static_cast<double>(id_denom)
                               : 1.0;
    return report;
}

SynthSequence generate(const SynthSpec& spec, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    SynthSequence seq;
    seq.meta = SceneMetadata{spec.frame_rate, spec.frame_width, spec.frame_height};
    seq.n_frames = spec.n_frames;

    // Start positions on a grid with per-object offsets, so trajectories
    // begin well separated.
    const int grid_cols = std::max(1, static_cast<int>(std::ceil(std::sqrt(
                                          spec.n_objects * spec.frame_width /
                                          std::max(1.0, spec.frame_height)))));
    const int grid_rows =
        std::max(1, (spec.n_objects + grid_cols - 1) / std::max(1, grid_cols));
    const double cell_w = spec.frame_width / grid_cols;
    const double cell_h = spec.frame_height / grid_rows;

    struct ObjectState {
        double cx, cy, vx, vy, w, h;
    };
    std::vector<ObjectState> objects;
    for (int i = 0; i < spec.n_objects; ++i) {
        ObjectState obj;
        const int col = i % grid_cols;
        const int row = i / grid_cols;
        obj.w = spec.box_width;
        obj.h = spec.box_height;
        obj.cx = (col + 0.5) * cell_w + (unit(rng) - 0.5) * cell_w * 0.2;
        obj.cy = (row + 0.5) * cell_h + (unit(rng) - 0.5) * cell_h * 0.2;
        const double speed = spec.min_speed + unit(rng) * (spec.max_speed - spec.min_speed);
        const double angle = unit(rng) * 2.0 * M_PI;
        obj.vx = speed * std::cos(angle);
        obj.vy = speed * std::sin(angle);
        objects.push_back(obj);
    }

    const auto occluded = [&](int object_id, int frame, double& dip) {
        for (const OcclusionEpisode& ep : spec.occlusions) {
            if (frame >= ep.start_frame && frame < ep.start_frame + ep.duration &&
                std::find(ep.object_ids.begin(), ep.object_ids.end(), object_id) !=
                    ep.object_ids.end()) {
                dip = ep.score_dip;
                return true;
            }
        }
        return false;
    };

    std::vector<bool> retired(static_cast<std::size_t>(spec.n_objects), false);
    for (int frame = 1; frame <= spec.n_frames; ++frame) {
        const double t = static_cast<double>(frame - 1);
        const double pan = spec.camera_pan_per_frame * t;
        for (int i = 0; i < spec.n_objects; ++i) {
            if (retired[static_cast<std::size_t>(i)]) {
                continue;
            }
            const ObjectState& obj = objects[static_cast<std::size_t>(i)];
            double cx = obj.cx + obj.vx * t + pan;
            double cy = obj.cy + obj.vy * t;
            const double half_w = obj.w / 2.0;
            const double half_h = obj.h / 2.0;
            const bool outside = cx - half_w < 0.0 || cx + half_w > spec.frame_width ||
                                 cy - half_h < 0.0 || cy + half_h > spec.frame_height;
            if (outside) {
                if (spec.retire_at_exit) {
                    retired[static_cast<std::size_t>(i)] = true;
                    continue;
                }
                cx = std::clamp(cx, half_w, spec.frame_width - half_w);
                cy = std::clamp(cy, half_h, spec.frame_height - half_h);
            }
            const BoundingBox gt_box(cx - half_w, cy - half_h, cx + half_w, cy + half_h);
            seq.gt[frame].push_back({i + 1, gt_box});

            double dip = 0.0;
            double score = spec.detection_score;
            if (occluded(i + 1, frame, dip)) {
                if (dip <= 0.0) {
                    continue;  // detector misses the object entirely
                }
                score = dip;
            }
            const double jx = spec.jitter_sigma > 0.0 ? gauss(rng) * spec.jitter_sigma : 0.0;
            const double jy = spec.jitter_sigma > 0.0 ? gauss(rng) * spec.jitter_sigma : 0.0;
            const BoundingBox det_box(gt_box.x1 + jx, gt_box.y1 + jy, gt_box.x2 + jx,
                                      gt_box.y2 + jy);
            seq.detections[frame].push_back({det_box, score});
        }

        if (spec.false_positive_rate > 0.0) {
            const double whole = std::floor(spec.false_positive_rate);
            int count = static_cast<int>(whole);
            count += unit(rng) < spec.false_positive_rate - whole ? 1 : 0;
            for (int k = 0; k < count; ++k) {
                const double w = spec.box_width;
                const double h = spec.box_height;
                const double x = unit(rng) * std::max(1.0, spec.frame_width - w);
                const double y = unit(rng) * std::max(1.0, spec.frame_height - h);
                seq.detections[frame].push_back(
                    {BoundingBox(x, y, x + w, y + h), spec.detection_score});
            }
        }
    }

    // Background keypoints: still for a static camera, shifted by the pan
    // speed otherwise.
    constexpr int kKeypointsPerSample = 16;
    for (std::size_t s = 0; s < seq.keypoints.size(); ++s) {
        for (int k = 0; k < kKeypointsPerSample; ++k) {
            KeypointMatch match;
            match.prev_x = unit(rng) * spec.frame_width;
            match.prev_y = unit(rng) * spec.frame_height;
            const double noise = (unit(rng) - 0.5) * 0.5;
            match.cur_x = match.prev_x + spec.camera_pan_per_frame + noise;
            match.cur_y = match.prev_y + noise;
            seq.keypoints[s].push_back(match);
        }
    }
    return seq;
}

std::string ablation_mode_name(AblationMode mode) {
    switch (mode) {
        case AblationMode::FirstIou:
            return "IoU+IoU";
        case AblationMode::FirstGiou:
            return "GIoU+IoU";
        case AblationMode::FirstDiou:
            return "DIoU+IoU";
        case AblationMode::FirstEiou:
            return "EIoU+IoU";
        case AblationMode::Default:
            return "Default";
        case AblationMode::SameTimeout:
            return "Same Time-out Everywhere";
        case AblationMode::FixedHyperparameters:
            return "Fixed Hyperparameter";
        case AblationMode::SimpleOffline:
            return "Simple Offline";
        case AblationMode::AdvancedOffline:
            return "Advanced Offline";
    }
    return "?";
}

std::vector<AblationMode> innovation_modes() {
    return {AblationMode::Default, AblationMode::SameTimeout,
            AblationMode::FixedHyperparameters, AblationMode::SimpleOffline,
            AblationMode::AdvancedOffline};
}

std::vector<AblationMode> cost_grid_modes() {
    return {AblationMode::FirstIou, AblationMode::FirstGiou, AblationMode::FirstDiou,
            AblationMode::FirstEiou, AblationMode::Default};
}

FrameEntries tracks_to_entries(const std::vector<TrackPtr>& tracks) {
    FrameEntries entries;
    for (const TrackPtr& track : tracks) {
        for (const Observation& obs : track->history()) {
            entries[obs.frame].push_back({track->id(), obs.box, obs.score});
        }
    }
    for (auto& [frame, list] : entries) {
        std::sort(list.begin(), list.end(),
                  [](const GtEntry& a, const GtEntry& b) { return a.id < b.id; });
    }
    return entries;
}

std::vector<TrackPtr> run_tracker(const FrameDetections& detections, int n_frames,
                                  const SceneMetadata& meta, const TrackerConfig& config,
                                  CostKind first_cost) {
    Tracker tracker(config, meta, first_cost);
    static const std::vector<Detection> kNoDetections;
    for (int frame = 1; frame <= n_frames; ++frame) {
        const auto it = detections.find(frame);
        tracker.step(it == detections.end() ? kNoDetections : it->second, frame);
    }
    return tracker.all_tracks();
}

SceneProfile profile_from_inputs(const FrameDetections& detections, int n_frames,
                                 const std::array<std::vector<KeypointMatch>, 5>* keypoints,
                                 const TrackerConfig& config) {
    SceneProfile profile;
    if (keypoints != nullptr) {
        for (const auto& sample : *keypoints) {
            profile.stationary_votes.push_back(
                frame_pair_is_stationary(sample, config.stationary_displacement_px));
        }
        profile.fixed_camera =
            classify_camera(*keypoints, config.stationary_displacement_px);
    }

    std::vector<std::vector<double>> sample_heights;
    for (const int idx : sample_frame_indices(n_frames)) {
        const auto it = detections.find(idx + 1);  // frames are 1-based
        if (it == detections.end()) {
            continue;
        }
        std::vector<double> heights;
        for (const Detection& det : it->second) {
            if (det.score > config.lth && det.box.height() > 0.0) {
                heights.push_back(det.box.height());
            }
        }
        if (heights.size() >= 2) {
            profile.depth_scores.push_back(depth_score(heights));
            sample_heights.push_back(std::move(heights));
        }
    }
    profile.deep_scene = classify_depth(sample_heights, config.depth_threshold);
    return profile;
}

SceneProfile profile_from_sequence(const SynthSequence& seq, const TrackerConfig& config) {
    return profile_from_inputs(seq.detections, seq.n_frames, &seq.keypoints, config);
}

std::vector<AblationRow> ablate(const SynthSequence& seq, const TrackerConfig& config,
                                std::span<const AblationMode> modes) {
    std::vector<AblationRow> rows;
    for (const AblationMode mode : modes) {
        TrackerConfig variant = config;
        CostKind first_cost = CostKind::First;
        bool offline = false;
        bool simple = false;
        switch (mode) {
            case AblationMode::FirstIou:
                first_cost = CostKind::Iou;
                break;
            case AblationMode::FirstGiou:
                first_cost = CostKind::Giou;
                break;
            case AblationMode::FirstDiou:
                first_cost = CostKind::Diou;
                break;
            case AblationMode::FirstEiou:
                first_cost = CostKind::Eiou;
                break;
            case AblationMode::Default:
                break;
            case AblationMode::SameTimeout:
                variant.timeout_marginal = variant.timeout_central;
                break;
            case AblationMode::FixedHyperparameters:
                variant.hth_m = 0.0;
                variant.nth_m = 0.0;
                variant.mth_m = 0.0;
                break;
            case AblationMode::SimpleOffline:
                offline = true;
                simple = true;
                break;
            case AblationMode::AdvancedOffline:
                offline = true;
                break;
        }

        std::vector<TrackPtr> tracks =
            run_tracker(seq.detections, seq.n_frames, seq.meta, variant, first_cost);
        if (offline) {
            const SceneProfile profile = profile_from_sequence(seq, variant);
            tracks = postprocess(tracks, variant, profile, seq.meta.frame_rate, simple);
        }
        rows.push_back({mode, evaluate(seq.gt, tracks_to_entries(tracks))});
    }
    return rows;
}

std::string format_ablation_table(std::span<const AblationRow> rows) {
    std::size_t name_width = 4;
    for (const AblationRow& row : rows) {
        name_width = std::max(name_width, ablation_mode_name(row.mode).size());
    }
    std::ostringstream out;
    out << std::left << std::setw(static_cast<int>(name_width)) << "Mode" << std::right
        << std::setw(9) << "MOTA" << std::setw(9) << "IDF1" << std::setw(7) << "IDSW"
        << std::setw(7) << "FP" << std::setw(7) << "FN" << '\n';
    out << std::fixed << std::setprecision(4);
    for (const AblationRow& row : rows) {
        out << std::left << std::setw(static_cast<int>(name_width))
            << ablation_mode_name(row.mode) << std::right << std::setw(9) << row.report.mota
            << std::setw(9) << row.report.idf1 << std::setw(7) << row.report.id_switches
            << std::setw(7) << row.report.false_positives << std::setw(7)
            << row.report.false_negatives << '\n';
    }
    return out.str();
}

std::string format_ablation_csv(std::span<const AblationRow> rows) {
    std::ostringstream out;
    out << "mode,mota,idf1,id_switches,false_positives,false_negatives,gt_count\n";
    out << std::setprecision(10);
    for (const AblationRow& row : rows) {
        out << ablation_mode_name(row.mode) << ',' << row.report.mota << ',' << row.report.idf1
            << ',' << row.report.id_switches << ',' << row.report.false_positives << ','
            << row.report.false_negatives << ',' << row.report.gt_count << '\n';
    }
    return out.str();
}

double throughput(const FrameDetections& detections, int n_frames, const SceneMetadata& meta,
                  const TrackerConfig& config, int repetitions) {
    if (n_frames <= 0) {
        return std::numeric_limits<double>::infinity();
    }
    std::vector<double> rates;
    for (int rep = 0; rep < std::max(1, repetitions); ++rep) {
        const auto start = std::chrono::steady_clock::now();
        run_tracker(detections, n_frames, meta, config);
        const auto stop = std::chrono::steady_clock::now();
        const double seconds = std::chrono::duration<double>(stop - start).count();
        rates.push_back(seconds > 0.0 ? n_frames / seconds
                                      : std::numeric_limits<double>::infinity());
    }
    std::sort(rates.begin(), rates.end());
    return rates[rates.size() / 2];
}

}  // namespace sfsort

#pragma once

#include "sfsort/mot_io.hpp"
#include "sfsort/postprocess.hpp"
#include "sfsort/tracker.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sfsort {

/// CLEAR/identity evaluation summary.
struct EvalReport {
    double mota = 0.0;
    double idf1 = 0.0;
    int id_switches = 0;
    int false_positives = 0;
    int false_negatives = 0;
    int gt_count = 0;
};

/**
 * CLEAR-style evaluation of results against ground truth.
 *
 * Per frame, matches carried over from the previous frame are kept while
 * their IoU stays at or above the threshold; the remainder is matched by
 * minimum-cost assignment on 1 - IoU. An identity switch is counted when a
 * ground-truth object re-matches under a different result id than its last
 * known one. IDF1 comes from a global optimal identity correspondence.
 */
EvalReport evaluate(const FrameEntries& gt, const FrameEntries& results,
                    double iou_threshold = 0.5);

/// One occlusion episode of the synthetic generator. A non-positive
/// score_dip drops the affected detections entirely; otherwise they are
/// emitted with the dipped score.
struct OcclusionEpisode {
    int start_frame = 0;  // 1-based, inclusive
    int duration = 0;     // frames
    std::vector<int> object_ids;
    double score_dip = 0.0;
};

/// Parameters of the synthetic sequence generator.
struct SynthSpec {
    int n_objects = 10;
    int n_frames = 100;
    double frame_width = 1920.0;
    double frame_height = 1080.0;
    double frame_rate = 30.0;
    double min_speed = 1.0;  // px/frame
    double max_speed = 5.0;
    double jitter_sigma = 0.0;  // detection-box position noise, px
    double detection_score = 0.95;
    double box_width = 40.0;
    double box_height = 100.0;
    std::vector<OcclusionEpisode> occlusions;
    double false_positive_rate = 0.0;  // expected spurious detections per frame
    double camera_pan_per_frame = 0.0;  // shifts boxes and keypoints
    bool retire_at_exit = false;        // objects leaving the frame end their gt
};

/// Generated sequence: clean ground truth, noisy detections, keypoints.
struct SynthSequence {
    SceneMetadata meta;
    int n_frames = 0;
    FrameEntries gt;
    FrameDetections detections;
    std::array<std::vector<KeypointMatch>, 5> keypoints;
};

/// Deterministic synthetic sequence for the given seed. Objects start on a
/// jittered grid and follow linear trajectories, clamped to the frame
/// unless retire_at_exit is set.
SynthSequence generate(const SynthSpec& spec, std::uint64_t seed);

/// Tracker variants exercised by the ablation harness.
enum class AblationMode {
    FirstIou,   // first-stage cost 1 - IoU
    FirstGiou,  // first-stage cost 1 - GIoU
    FirstDiou,  // first-stage cost 1 - DIoU
    FirstEiou,  // first-stage cost 1 - EIoU
    Default,    // full tracker, BBSI first stage, no post-processing
    SameTimeout,          // marginal timeout equal to central
    FixedHyperparameters, // adaptation slopes zeroed
    SimpleOffline,        // post-processing with scene-independent timeout
    AdvancedOffline,      // post-processing gated by the scene profile
};

std::string ablation_mode_name(AblationMode mode);

/// The five innovation-study modes.
std::vector<AblationMode> innovation_modes();

/// The cost-function grid (four descriptor variants plus the default).
std::vector<AblationMode> cost_grid_modes();

struct AblationRow {
    AblationMode mode;
    EvalReport report;
};

/// Runs each requested tracker variant over the sequence and evaluates it
/// against the ground truth.
std::vector<AblationRow> ablate(const SynthSequence& seq, const TrackerConfig& config,
                                std::span<const AblationMode> modes);

/// Formats ablation rows as an aligned plain-text table.
std::string format_ablation_table(std::span<const AblationRow> rows);

/// Formats ablation rows as CSV.
std::string format_ablation_csv(std::span<const AblationRow> rows);

/// Scene profile derived from a sequence's keypoints and detection heights.
SceneProfile profile_from_sequence(const SynthSequence& seq, const TrackerConfig& config);
SceneProfile profile_from_inputs(const FrameDetections& detections, int n_frames,
                                 const std::array<std::vector<KeypointMatch>, 5>* keypoints,
                                 const TrackerConfig& config);

/// Flattens track histories into per-frame entries (interpolated included).
FrameEntries tracks_to_entries(const std::vector<TrackPtr>& tracks);

/// Runs a fresh tracker over all frames; returns every track created.
std::vector<TrackPtr> run_tracker(const FrameDetections& detections, int n_frames,
                                  const SceneMetadata& meta, const TrackerConfig& config,
                                  CostKind first_cost = CostKind::First);

/**
 * Median tracking throughput in frames per second over the given number of
 * repeated full-sequence runs, detections preloaded. Returns +infinity for
 * an empty sequence.
 */
double throughput(const FrameDetections& detections, int n_frames, const SceneMetadata& meta,
                  const TrackerConfig& config, int repetitions);

}  // namespace sfsort

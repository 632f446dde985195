#pragma once

#include <span>
#include <vector>

namespace sfsort {

/// One keypoint matched across a consecutive frame pair.
struct KeypointMatch {
    double prev_x = 0.0;
    double prev_y = 0.0;
    double cur_x = 0.0;
    double cur_y = 0.0;
};

/// Scene-level features that gate the offline post-processing.
struct SceneProfile {
    bool fixed_camera = false;
    bool deep_scene = false;
    std::vector<double> depth_scores;     // one per usable sample
    std::vector<bool> stationary_votes;   // one per sample pair
};

/// Euclidean displacement of a matched keypoint between the two frames.
double displacement(const KeypointMatch& match);

/**
 * True when at least one keypoint moved less than threshold pixels
 * (strictly), which indicates the camera held still across the pair.
 * An empty match list is no evidence of stationarity and yields false.
 */
bool frame_pair_is_stationary(std::span<const KeypointMatch> matches, double threshold = 5.0);

/**
 * Majority vote over per-sample stationarity verdicts. Short videos may
 * provide fewer than five samples; the majority is taken over those
 * present. Throws std::invalid_argument when no samples are given.
 */
bool classify_camera(std::span<const std::vector<KeypointMatch>> samples,
                     double threshold = 5.0);

/**
 * Depth score of one frame's detection heights, in [0, 1).
 *
 * Zero when heights are uniform; approaches one when a few near objects
 * dwarf the smallest one, the signature of a deep scene. Requires at least
 * two heights (throws std::invalid_argument otherwise).
 */
double depth_score(std::span<const double> heights);

/**
 * Deep-scene verdict: mean per-sample depth score strictly above the
 * threshold. Samples with fewer than two detections are skipped; with no
 * usable samples the scene counts as shallow.
 */
bool classify_depth(std::span<const std::vector<double>> sample_heights, double threshold);

/// Indices of the five uniformly spaced sample frame pairs of a video with
/// total_frames frames; pair k covers (index, index + 1).
std::vector<int> sample_frame_indices(int total_frames, int samples = 5);

}  // namespace sfsort

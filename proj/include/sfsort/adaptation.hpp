#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace sfsort {

struct Detection;  // tracker.hpp

/// Built-in hyperparameter profiles.
enum class Profile {
    Mot17,
    Mot20,
};

/**
 * Full tracker configuration: score thresholds, association gates, margin
 * and timeout coefficients, adaptation slopes, and the post-processing
 * coefficients. Defaults correspond to the MOT17 profile.
 */
struct TrackerConfig {
    // Fixed detector-dependent thresholds.
    double lth = 0.30;   // minimum score for intermediate detections
    double mth2 = 0.10;  // second-association cost gate

    // Intercept/slope pairs for the crowd-adaptive thresholds.
    double hth0 = 0.82;  // high-score threshold intercept
    double hth_m = 0.10;
    double nth0 = 0.70;  // new-track score threshold intercept
    double nth_m = 0.10;
    double mth0 = 0.50;  // first-association gate intercept
    double mth_m = 0.05;

    // Margins as fractions of the frame dimensions.
    double margin_horizontal = 0.10;
    double margin_vertical = 0.10;

    // Lost-track timeouts in seconds; multiplied by the frame rate.
    double timeout_central = 1.00;
    double timeout_marginal = 0.70;

    // Crowd-count score threshold. Defaults to lth: detections too weak for
    // the second association do not count toward crowding.
    double cth = 0.30;

    // Post-processing coefficients (frames per Hz of frame rate).
    double cm = 1.0;   // minimum valid track length
    double cd1 = 0.7;  // interpolation timeout, fixed camera + deep scene
    double cd2 = 1.0;  // fixed camera + shallow scene
    double cd3 = 0.1;  // moving camera + deep scene
    double cd4 = 0.7;  // moving camera + shallow scene

    // Scene-feature classification constants.
    double depth_threshold = 0.5;
    double stationary_displacement_px = 5.0;
};

/// Per-video metadata needed to derive tracker parameters.
struct SceneMetadata {
    double frame_rate = 30.0;  // Hz
    double width = 1920.0;     // px
    double height = 1080.0;    // px
};

/// Parameters derived once per video from the scene metadata.
struct VideoParams {
    int central_timeout_frames = 0;   // CTime
    int marginal_timeout_frames = 0;  // MTime
    double hmargin_px = 0.0;
    double vmargin_px = 0.0;
};

/// Per-frame thresholds adapted to the crowd level.
struct AdaptiveThresholds {
    double hth = 0.0;
    double nth = 0.0;
    double mth1 = 0.0;
};

/// Tuned hyperparameter values for the given benchmark profile.
TrackerConfig default_config(Profile profile);

/**
 * Scales the timeout and margin coefficients by the video's frame rate and
 * dimensions. Timeouts are rounded to the nearest frame, ties up.
 */
VideoParams derive_video_params(const TrackerConfig& config, const SceneMetadata& meta);

/**
 * Computes the crowd-adaptive thresholds for one frame. The crowd level is
 * log10 of the number of detections scoring above cth (clamped to >= 1, so
 * an empty frame uses the intercept values).
 */
AdaptiveThresholds adaptive_thresholds(const TrackerConfig& config,
                                       std::span<const Detection> detections);

/// Same, from a precomputed crowd count.
AdaptiveThresholds adaptive_thresholds_for_count(const TrackerConfig& config,
                                                 std::size_t n_above_cth);

/// Parses a profile name ("mot17" / "mot20"); throws on anything else.
Profile parse_profile(const std::string& name);

/**
 * Applies one "KEY=value" or "KEY value" style override. Keys are the
 * hyperparameter symbol names (LTH, MTH2, HTH0, HTHm, NTH0, NTHm, MTH0,
 * MTHm, HMargin, VMargin, CTime, MTime, CTH, Cm, Cd1..Cd4, DepthThreshold,
 * StationaryDisplacement). Throws std::invalid_argument on unknown keys.
 */
void apply_config_entry(TrackerConfig& config, const std::string& key, double value);

/// Loads "key = value" lines from a flat config file on top of base.
/// Blank lines and lines starting with '#' are ignored.
TrackerConfig load_config_file(const std::string& path, TrackerConfig base);

/// The effective configuration as "key = value" lines, same key names.
std::string format_config(const TrackerConfig& config);

}  // namespace sfsort

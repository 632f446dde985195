#pragma once

#include "sfsort/adaptation.hpp"
#include "sfsort/scene_features.hpp"
#include "sfsort/tracker.hpp"

#include <vector>

namespace sfsort {

/// Offline refinement parameters, in frames.
struct PostprocessParams {
    int n_min = 0;  // minimum observation count of a valid track
    int n_dti = 0;  // maximum gap length eligible for interpolation
};

/**
 * Scales the post-processing coefficients by the frame rate. The
 * interpolation timeout coefficient is selected by the scene's
 * (fixed camera, deep scene) quadrant; the minimum-length coefficient is
 * scene-independent. Frame counts round to nearest, ties up.
 */
PostprocessParams compute_params(const TrackerConfig& config, const SceneProfile& profile,
                                 double frame_rate);

/// Keeps tracks with at least n_min real observations (inclusive).
std::vector<TrackPtr> remove_short_tracks(const std::vector<TrackPtr>& tracks, int n_min);

/**
 * Fills history gaps of up to n_dti frames with linearly interpolated
 * boxes. Gating is per gap: longer gaps are left untouched. Inserted
 * entries are flagged as interpolated and carry a zero score. Original
 * observations are never altered, so the operation is idempotent.
 */
void interpolate_gaps(Track& track, int n_dti);

/**
 * Full offline pass: drop short tracks, then interpolate each survivor's
 * gaps. In simple mode the interpolation timeout ignores the scene profile
 * and always uses the fixed-camera shallow-scene coefficient.
 */
std::vector<TrackPtr> postprocess(const std::vector<TrackPtr>& tracks,
                                  const TrackerConfig& config, const SceneProfile& profile,
                                  double frame_rate, bool simple_mode = false);

}  // namespace sfsort

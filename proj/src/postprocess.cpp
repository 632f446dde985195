#include "sfsort/postprocess.hpp"

#include <algorithm>
#include <cmath>

namespace sfsort {

namespace {

int round_frames(double value) {
    return static_cast<int>(std::floor(value + 0.5));
}

double interpolation_coefficient(const TrackerConfig& config, const SceneProfile& profile) {
    if (profile.fixed_camera) {
        return profile.deep_scene ? config.cd1 : config.cd2;
    }
    return profile.deep_scene ? config.cd3 : config.cd4;
}

}  // namespace

PostprocessParams compute_params(const TrackerConfig& config, const SceneProfile& profile,
                                 double frame_rate) {
    PostprocessParams params;
    params.n_min = round_frames(config.cm * frame_rate);
    params.n_dti = round_frames(interpolation_coefficient(config, profile) * frame_rate);
    return params;
}

std::vector<TrackPtr> remove_short_tracks(const std::vector<TrackPtr>& tracks, int n_min) {
    std::vector<TrackPtr> kept;
    kept.reserve(tracks.size());
    for (const TrackPtr& track : tracks) {
        if (static_cast<int>(track->observation_count()) >= n_min) {
            kept.push_back(track);
        }
    }
    return kept;
}

void interpolate_gaps(Track& track, int n_dti) {
    const std::vector<Observation>& history = track.history();
    if (history.size() < 2) {
        return;
    }
    std::vector<Observation> filled;
    filled.reserve(history.size());
    filled.push_back(history.front());
    for (std::size_t i = 1; i < history.size(); ++i) {
        const Observation& prev = history[i - 1];
        const Observation& cur = history[i];
        const int gap = cur.frame - prev.frame;
        if (gap > 1 && gap <= n_dti) {
            for (int frame = prev.frame + 1; frame < cur.frame; ++frame) {
                const double t = static_cast<double>(frame - prev.frame) / gap;
                const BoundingBox box(prev.box.x1 + t * (cur.box.x1 - prev.box.x1),
                                      prev.box.y1 + t * (cur.box.y1 - prev.box.y1),
                                      prev.box.x2 + t * (cur.box.x2 - prev.box.x2),
                                      prev.box.y2 + t * (cur.box.y2 - prev.box.y2));
                filled.push_back({frame, box, 0.0, true});
            }
        }
        filled.push_back(cur);
    }
    track.set_history(std::move(filled));
}

std::vector<TrackPtr> postprocess(const std::vector<TrackPtr>& tracks,
                                  const TrackerConfig& config, const SceneProfile& profile,
                                  double frame_rate, bool simple_mode) {
    PostprocessParams params = compute_params(config, profile, frame_rate);
    if (simple_mode) {
        params.n_dti = round_frames(config.cd2 * frame_rate);
    }
    std::vector<TrackPtr> kept = remove_short_tracks(tracks, params.n_min);
    for (const TrackPtr& track : kept) {
        interpolate_gaps(*track, params.n_dti);
    }
    return kept;
}

}  // namespace sfsort

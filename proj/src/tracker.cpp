#include "sfsort/tracker.hpp"

#include "sfsort/assignment.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>
#include <utility>

namespace sfsort {

std::size_t Track::observation_count() const {
    std::size_t n = 0;
    for (const Observation& obs : history_) {
        if (!obs.interpolated) {
            ++n;
        }
    }
    return n;
}

TrackStatus classify_loss_location(const BoundingBox& box, double width, double height,
                                   double hmargin, double vmargin) {
    const auto [cx, cy] = box.center();
    const bool marginal = cx < hmargin || cx > width - hmargin ||
                          cy < vmargin || cy > height - vmargin;
    return marginal ? TrackStatus::LostAtMargin : TrackStatus::LostAtCenter;
}

Tracker::Tracker(const TrackerConfig& config, const SceneMetadata& scene, CostKind first_cost)
    : config_(config), scene_(scene), first_cost_(first_cost) {
    if (scene.frame_rate <= 0.0 || scene.width <= 0.0 || scene.height <= 0.0) {
        throw std::invalid_argument("Tracker: frame rate and dimensions must be positive");
    }
    params_ = derive_video_params(config_, scene_);
}

void Tracker::prune_lost(int frame_no) {
    std::erase_if(lost_, [&](const TrackPtr& track) {
        const int age = frame_no - track->last_frame();
        const int timeout = track->status() == TrackStatus::LostAtCenter
                                ? params_.central_timeout_frames
                                : params_.marginal_timeout_frames;
        return age > timeout;
    });
}

TrackPtr Tracker::spawn(const Detection& det, int frame_no) {
    auto track = std::make_shared<Track>(next_id_++, frame_no, det.box, det.score);
    archive_.push_back(track);
    return track;
}

const std::vector<TrackPtr>& Tracker::step(const std::vector<Detection>& detections,
                                           int frame_no) {
    if (frame_no <= last_frame_no_) {
        throw std::invalid_argument("Tracker::step: frame numbers must be increasing");
    }
    last_frame_no_ = frame_no;

    prune_lost(frame_no);

    std::vector<TrackPtr> pool = active_;
    pool.insert(pool.end(), lost_.begin(), lost_.end());

    const AdaptiveThresholds th = adaptive_thresholds(config_, detections);

    std::vector<Detection> definite;
    std::vector<Detection> possible;
    for (const Detection& det : detections) {
        if (det.score > th.hth) {
            definite.push_back(det);
        } else if (det.score > config_.lth) {
            possible.push_back(det);
        }
    }

    std::vector<TrackPtr> next_active;
    std::vector<TrackPtr> unmatched_tracks;

    if (!pool.empty()) {
        std::vector<BoundingBox> track_boxes;
        track_boxes.reserve(pool.size());
        for (const TrackPtr& track : pool) {
            track_boxes.push_back(track->last_box());
        }
        std::vector<BoundingBox> det_boxes;
        det_boxes.reserve(definite.size());
        for (const Detection& det : definite) {
            det_boxes.push_back(det.box);
        }

        const MatchResult first = solve(cost_matrix(track_boxes, det_boxes, first_cost_), th.mth1);
        for (const auto& match : first.matches) {
            const TrackPtr& track = pool[static_cast<std::size_t>(match.row)];
            const Detection& det = definite[static_cast<std::size_t>(match.col)];
            track->activate(frame_no, det.box, det.score);
            next_active.push_back(track);
        }
        for (const int col : first.unmatched_cols) {
            const Detection& det = definite[static_cast<std::size_t>(col)];
            if (det.score >= th.nth) {
                next_active.push_back(spawn(det, frame_no));
            }
        }
        for (const int row : first.unmatched_rows) {
            unmatched_tracks.push_back(pool[static_cast<std::size_t>(row)]);
        }
    } else {
        for (const Detection& det : definite) {
            if (det.score >= th.nth) {
                next_active.push_back(spawn(det, frame_no));
            }
        }
    }

    if (!unmatched_tracks.empty()) {
        std::vector<BoundingBox> track_boxes;
        track_boxes.reserve(unmatched_tracks.size());
        for (const TrackPtr& track : unmatched_tracks) {
            track_boxes.push_back(track->last_box());
        }
        std::vector<BoundingBox> det_boxes;
        det_boxes.reserve(possible.size());
        for (const Detection& det : possible) {
            det_boxes.push_back(det.box);
        }

        const MatchResult second =
            solve(cost_matrix(track_boxes, det_boxes, CostKind::Second), config_.mth2);
        std::vector<TrackPtr> still_unmatched;
        for (const auto& match : second.matches) {
            const TrackPtr& track = unmatched_tracks[static_cast<std::size_t>(match.row)];
            const Detection& det = possible[static_cast<std::size_t>(match.col)];
            track->activate(frame_no, det.box, det.score);
            next_active.push_back(track);
        }
        for (const int row : second.unmatched_rows) {
            still_unmatched.push_back(unmatched_tracks[static_cast<std::size_t>(row)]);
        }
        unmatched_tracks = std::move(still_unmatched);
    }

    std::vector<TrackPtr> next_lost;
    for (const TrackPtr& track : unmatched_tracks) {
        track->mark_lost(classify_loss_location(track->last_box(), scene_.width, scene_.height,
                                                params_.hmargin_px, params_.vmargin_px));
        next_lost.push_back(track);
    }

    active_ = std::move(next_active);
    lost_ = std::move(next_lost);
    return active_;
}

std::vector<TrackPtr> Tracker::all_tracks() const {
    return archive_;
}

}  // namespace sfsort

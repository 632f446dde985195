#pragma once

#include "sfsort/adaptation.hpp"
#include "sfsort/geometry.hpp"

#include <memory>
#include <vector>

namespace sfsort {

/// One detector output: a box plus its confidence score.
struct Detection {
    BoundingBox box;
    double score = 0.0;
};

enum class TrackStatus {
    Active,
    LostAtCenter,
    LostAtMargin,
};

/// One history entry of a track. Interpolated entries are synthetic frames
/// added by post-processing and carry a zero score.
struct Observation {
    int frame = 0;
    BoundingBox box;
    double score = 0.0;
    bool interpolated = false;
};

/**
 * An identity-bearing trajectory. The history holds one observation per
 * frame the track was active in, strictly increasing in frame number; the
 * last entry doubles as the association anchor while the track is lost.
 */
class Track {
public:
    Track(int id, int frame, const BoundingBox& box, double score)
        : id_(id), status_(TrackStatus::Active) {
        history_.push_back({frame, box, score, false});
    }

    int id() const { return id_; }
    TrackStatus status() const { return status_; }
    const BoundingBox& last_box() const { return history_.back().box; }
    double last_score() const { return history_.back().score; }
    int last_frame() const { return history_.back().frame; }
    const std::vector<Observation>& history() const { return history_; }

    /// Number of real (non-interpolated) observations.
    std::size_t observation_count() const;

    void activate(int frame, const BoundingBox& box, double score) {
        status_ = TrackStatus::Active;
        history_.push_back({frame, box, score, false});
    }

    void mark_lost(TrackStatus status) { status_ = status; }

    /// Replaces the history; used by offline gap interpolation.
    void set_history(std::vector<Observation> history) { history_ = std::move(history); }

private:
    int id_;
    TrackStatus status_;
    std::vector<Observation> history_;
};

using TrackPtr = std::shared_ptr<Track>;

/// Lost-at-center vs lost-at-margin, decided by the box center. Boundary
/// equality counts as central.
TrackStatus classify_loss_location(const BoundingBox& box, double width, double height,
                                   double hmargin, double vmargin);

/**
 * The online tracking state machine. Each step prunes expired lost tracks,
 * splits detections by score, runs the two-stage association, and refreshes
 * the active/lost lists. One tracker instance per video sequence; steps are
 * strictly sequential.
 */
class Tracker {
public:
    /**
     * @param config     hyperparameter set (see default_config)
     * @param scene      frame rate and dimensions of the video
     * @param first_cost cost flavor of the first association stage; the
     *                   non-default kinds exist for the ablation harness
     */
    Tracker(const TrackerConfig& config, const SceneMetadata& scene,
            CostKind first_cost = CostKind::First);

    /**
     * Processes one frame. frame_no must be strictly greater than the
     * previous frame's. Returns the tracks active in this frame.
     */
    const std::vector<TrackPtr>& step(const std::vector<Detection>& detections, int frame_no);

    const std::vector<TrackPtr>& active_tracks() const { return active_; }
    const std::vector<TrackPtr>& lost_tracks() const { return lost_; }

    /// Every track ever created, including pruned ones, by ascending id.
    std::vector<TrackPtr> all_tracks() const;

    const TrackerConfig& config() const { return config_; }
    const VideoParams& video_params() const { return params_; }

private:
    void prune_lost(int frame_no);
    TrackPtr spawn(const Detection& det, int frame_no);

    TrackerConfig config_;
    SceneMetadata scene_;
    VideoParams params_;
    CostKind first_cost_;

    std::vector<TrackPtr> active_;
    std::vector<TrackPtr> lost_;
    std::vector<TrackPtr> archive_;  // all tracks ever created
    int next_id_ = 1;
    int last_frame_no_ = 0;
};

}  // namespace sfsort

#include "sfsort/postprocess.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <set>
#include <vector>

using namespace sfsort;

namespace {

TrackPtr make_track(int id, const std::vector<std::pair<int, BoundingBox>>& observations,
                    double score = 0.9) {
    auto track = std::make_shared<Track>(id, observations.front().first,
                                         observations.front().second, score);
    for (std::size_t i = 1; i < observations.size(); ++i) {
        track->activate(observations[i].first, observations[i].second, score);
    }
    return track;
}

SceneProfile profile(bool fixed, bool deep) {
    SceneProfile p;
    p.fixed_camera = fixed;
    p.deep_scene = deep;
    return p;
}

int interpolated_count(const Track& track) {
    int count = 0;
    for (const Observation& obs : track.history()) {
        count += obs.interpolated ? 1 : 0;
    }
    return count;
}

}  // namespace

TEST(ComputeParams, Mot17QuadrantTable) {
    const TrackerConfig c = default_config(Profile::Mot17);
    EXPECT_EQ(compute_params(c, profile(true, true), 30.0).n_dti, 21);    // 0.7 * 30
    EXPECT_EQ(compute_params(c, profile(true, false), 30.0).n_dti, 30);   // 1.0 * 30
    EXPECT_EQ(compute_params(c, profile(false, true), 30.0).n_dti, 3);    // 0.1 * 30
    EXPECT_EQ(compute_params(c, profile(false, false), 30.0).n_dti, 21);  // 0.7 * 30
    for (const bool fixed : {true, false}) {
        for (const bool deep : {true, false}) {
            EXPECT_EQ(compute_params(c, profile(fixed, deep), 30.0).n_min, 30);
        }
    }
}

TEST(ComputeParams, Mot20RoundsHalfUp) {
    const TrackerConfig c = default_config(Profile::Mot20);
    for (const bool fixed : {true, false}) {
        for (const bool deep : {true, false}) {
            const PostprocessParams p = compute_params(c, profile(fixed, deep), 25.0);
            EXPECT_EQ(p.n_min, 38);  // 1.5 * 25 = 37.5
            EXPECT_EQ(p.n_dti, 13);  // 0.5 * 25 = 12.5
        }
    }
}

TEST(RemoveShortTracks, LengthIsObservationCount) {
    std::vector<TrackPtr> tracks;
    std::vector<std::pair<int, BoundingBox>> short_obs;
    for (int f = 1; f <= 5; ++f) {
        short_obs.emplace_back(f, BoundingBox(0, 0, 10, 10));
    }
    tracks.push_back(make_track(1, short_obs));
    std::vector<std::pair<int, BoundingBox>> long_obs;
    for (int f = 1; f <= 30; ++f) {
        long_obs.emplace_back(f, BoundingBox(0, 0, 10, 10));
    }
    tracks.push_back(make_track(2, long_obs));

    const auto kept = remove_short_tracks(tracks, 30);
    ASSERT_EQ(kept.size(), 1u);
    EXPECT_EQ(kept[0]->id(), 2);  // exactly 30 observations is kept

    EXPECT_EQ(remove_short_tracks(tracks, 0).size(), 2u);
    EXPECT_EQ(remove_short_tracks(tracks, 31).size(), 0u);
}

TEST(RemoveShortTracks, SparseSpanStillCountsObservations) {
    // 5 observations spread over 50 frames: length is 5, not 50.
    std::vector<std::pair<int, BoundingBox>> obs;
    for (int f = 1; f <= 50; f += 12) {
        obs.emplace_back(f, BoundingBox(0, 0, 10, 10));
    }
    const auto tracks = std::vector<TrackPtr>{make_track(1, obs)};
    EXPECT_TRUE(remove_short_tracks(tracks, 6).empty());
    EXPECT_EQ(remove_short_tracks(tracks, 5).size(), 1u);
}

TEST(InterpolateGaps, ClosedFormExample) {
    const TrackPtr track = make_track(
        1, {{10, BoundingBox(0, 0, 10, 10)}, {13, BoundingBox(6, 0, 16, 10)}});
    interpolate_gaps(*track, 3);
    const auto& history = track->history();
    ASSERT_EQ(history.size(), 4u);
    EXPECT_EQ(history[1].frame, 11);
    EXPECT_NEAR(history[1].box.x1, 2.0, 1e-9);
    EXPECT_NEAR(history[1].box.x2, 12.0, 1e-9);
    EXPECT_NEAR(history[1].box.y1, 0.0, 1e-9);
    EXPECT_NEAR(history[1].box.y2, 10.0, 1e-9);
    EXPECT_EQ(history[2].frame, 12);
    EXPECT_NEAR(history[2].box.x1, 4.0, 1e-9);
    EXPECT_NEAR(history[2].box.x2, 14.0, 1e-9);
    EXPECT_TRUE(history[1].interpolated);
    EXPECT_TRUE(history[2].interpolated);
    EXPECT_DOUBLE_EQ(history[1].score, 0.0);
    EXPECT_FALSE(history[0].interpolated);
    EXPECT_FALSE(history[3].interpolated);
}

TEST(InterpolateGaps, GapBeyondTimeoutUntouched) {
    const TrackPtr track = make_track(
        1, {{10, BoundingBox(0, 0, 10, 10)}, {14, BoundingBox(8, 0, 18, 10)}});
    interpolate_gaps(*track, 3);  // gap of 4 > 3
    EXPECT_EQ(track->history().size(), 2u);
}

TEST(InterpolateGaps, ConsecutiveFramesUntouched) {
    const TrackPtr track = make_track(
        1, {{10, BoundingBox(0, 0, 10, 10)}, {11, BoundingBox(2, 0, 12, 10)}});
    interpolate_gaps(*track, 30);
    EXPECT_EQ(track->history().size(), 2u);
}

TEST(InterpolateGaps, PerGapGating) {
    const TrackPtr track = make_track(1, {{1, BoundingBox(0, 0, 10, 10)},
                                          {4, BoundingBox(6, 0, 16, 10)},
                                          {20, BoundingBox(30, 0, 40, 10)}});
    interpolate_gaps(*track, 5);
    // First gap (3) filled, second gap (16) untouched.
    const auto& history = track->history();
    ASSERT_EQ(history.size(), 5u);
    EXPECT_EQ(history[1].frame, 2);
    EXPECT_EQ(history[2].frame, 3);
    EXPECT_EQ(history[3].frame, 4);
    EXPECT_EQ(history[4].frame, 20);
}

TEST(InterpolateGaps, Idempotent) {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> gap(1, 12);
    std::uniform_real_distribution<double> pos(0.0, 500.0);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<std::pair<int, BoundingBox>> obs;
        int frame = 1;
        for (int i = 0; i < 6; ++i) {
            const double x = pos(rng);
            const double y = pos(rng);
            obs.emplace_back(frame, BoundingBox(x, y, x + 20, y + 50));
            frame += gap(rng);
        }
        const TrackPtr once = make_track(1, obs);
        interpolate_gaps(*once, 6);
        const TrackPtr twice = make_track(1, obs);
        interpolate_gaps(*twice, 6);
        interpolate_gaps(*twice, 6);
        ASSERT_EQ(once->history().size(), twice->history().size());
        for (std::size_t i = 0; i < once->history().size(); ++i) {
            ASSERT_EQ(once->history()[i].frame, twice->history()[i].frame);
            ASSERT_EQ(once->history()[i].box, twice->history()[i].box);
        }
    }
}

TEST(InterpolateGaps, EndpointsPreservedAndCentersCollinear) {
    const BoundingBox start(10, 20, 40, 90);
    const BoundingBox end(70, 50, 110, 130);
    const TrackPtr track = make_track(1, {{5, start}, {15, end}});
    interpolate_gaps(*track, 20);
    const auto& history = track->history();
    ASSERT_EQ(history.size(), 11u);
    EXPECT_EQ(history.front().box, start);
    EXPECT_EQ(history.back().box, end);

    const auto [cx0, cy0] = start.center();
    const auto [cx1, cy1] = end.center();
    for (const Observation& obs : history) {
        const double t = (obs.frame - 5) / 10.0;
        const auto [cx, cy] = obs.box.center();
        ASSERT_NEAR(cx, cx0 + t * (cx1 - cx0), 1e-9);
        ASSERT_NEAR(cy, cy0 + t * (cy1 - cy0), 1e-9);
        ASSERT_NEAR(obs.box.width(), start.width() + t * (end.width() - start.width()), 1e-9);
        ASSERT_NEAR(obs.box.height(), start.height() + t * (end.height() - start.height()),
                    1e-9);
    }
}

TEST(InterpolateGaps, MonotoneInTimeout) {
    std::mt19937_64 rng(32);
    std::uniform_int_distribution<int> gap(1, 15);
    std::uniform_int_distribution<int> timeout(0, 16);
    std::uniform_real_distribution<double> pos(0.0, 500.0);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<std::pair<int, BoundingBox>> obs;
        int frame = 1;
        for (int i = 0; i < 5; ++i) {
            const double x = pos(rng);
            obs.emplace_back(frame, BoundingBox(x, x, x + 10, x + 30));
            frame += gap(rng);
        }
        const int small = timeout(rng);
        const int large = small + timeout(rng);
        const TrackPtr with_small = make_track(1, obs);
        const TrackPtr with_large = make_track(1, obs);
        interpolate_gaps(*with_small, small);
        interpolate_gaps(*with_large, large);
        std::set<int> small_frames;
        for (const Observation& o : with_small->history()) {
            small_frames.insert(o.frame);
        }
        for (const int f : small_frames) {
            const auto& hist = with_large->history();
            ASSERT_TRUE(std::any_of(hist.begin(), hist.end(),
                                    [f](const Observation& o) { return o.frame == f; }));
        }
    }
}

TEST(Postprocess, EmptyInput) {
    const TrackerConfig c = default_config(Profile::Mot17);
    EXPECT_TRUE(postprocess({}, c, profile(true, false), 30.0).empty());
}

TEST(Postprocess, RemovesFalseTrackAndFillsGap) {
    const TrackerConfig c = default_config(Profile::Mot17);
    std::vector<TrackPtr> tracks;
    // Three-observation false positive.
    tracks.push_back(make_track(1, {{1, BoundingBox(0, 0, 10, 10)},
                                    {2, BoundingBox(0, 0, 10, 10)},
                                    {3, BoundingBox(0, 0, 10, 10)}}));
    // Genuine track with a 5-frame hole, 40 observations total.
    std::vector<std::pair<int, BoundingBox>> obs;
    for (int f = 1; f <= 20; ++f) {
        obs.emplace_back(f, BoundingBox(100.0 + f, 100, 140.0 + f, 200));
    }
    for (int f = 26; f <= 45; ++f) {
        obs.emplace_back(f, BoundingBox(100.0 + f, 100, 140.0 + f, 200));
    }
    tracks.push_back(make_track(2, obs));

    const auto refined = postprocess(tracks, c, profile(true, false), 30.0);
    ASSERT_EQ(refined.size(), 1u);
    EXPECT_EQ(refined[0]->id(), 2);
    EXPECT_EQ(refined[0]->history().size(), 45u);  // hole of 5 filled
    EXPECT_EQ(interpolated_count(*refined[0]), 5);
}

TEST(Postprocess, AdvancedFillsFewerFramesOnMovingDeepScene) {
    const TrackerConfig c = default_config(Profile::Mot17);
    std::vector<std::pair<int, BoundingBox>> obs;
    for (int f = 1; f <= 35; ++f) {
        obs.emplace_back(f, BoundingBox(100.0 + f, 100, 140.0 + f, 200));
    }
    // 10-frame hole: fillable at n_dti 30 (simple) but not at 3 (Cd3).
    for (int f = 46; f <= 60; ++f) {
        obs.emplace_back(f, BoundingBox(100.0 + f, 100, 140.0 + f, 200));
    }

    const std::vector<TrackPtr> simple_in{make_track(1, obs)};
    const auto simple = postprocess(simple_in, c, profile(false, true), 30.0, true);
    ASSERT_EQ(simple.size(), 1u);
    EXPECT_EQ(interpolated_count(*simple[0]), 10);

    const std::vector<TrackPtr> advanced_in{make_track(1, obs)};
    const auto advanced = postprocess(advanced_in, c, profile(false, true), 30.0, false);
    ASSERT_EQ(advanced.size(), 1u);
    EXPECT_EQ(interpolated_count(*advanced[0]), 0);
}

TEST(Postprocess, FilteringMonotoneInMinimumLength) {
    std::vector<TrackPtr> tracks;
    for (int len = 1; len <= 20; ++len) {
        std::vector<std::pair<int, BoundingBox>> obs;
        for (int f = 1; f <= len; ++f) {
            obs.emplace_back(f, BoundingBox(0, 0, 10, 10));
        }
        tracks.push_back(make_track(len, obs));
    }
    std::size_t prev = tracks.size();
    for (int n_min = 0; n_min <= 22; ++n_min) {
        const std::size_t now = remove_short_tracks(tracks, n_min).size();
        ASSERT_LE(now, prev);
        prev = now;
    }
}

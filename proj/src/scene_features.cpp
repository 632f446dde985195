#include "sfsort/scene_features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sfsort {

double displacement(const KeypointMatch& match) {
    const double dx = match.cur_x - match.prev_x;
    const double dy = match.cur_y - match.prev_y;
    return std::hypot(dx, dy);
}

bool frame_pair_is_stationary(std::span<const KeypointMatch> matches, double threshold) {
    return std::any_of(matches.begin(), matches.end(), [threshold](const KeypointMatch& m) {
        return displacement(m) < threshold;
    });
}

bool classify_camera(std::span<const std::vector<KeypointMatch>> samples, double threshold) {
    if (samples.empty()) {
        throw std::invalid_argument("classify_camera: no samples");
    }
    std::size_t stationary = 0;
    for (const auto& sample : samples) {
        if (frame_pair_is_stationary(sample, threshold)) {
            ++stationary;
        }
    }
    return stationary * 2 > samples.size();
}

double depth_score(std::span<const double> heights) {
    if (heights.size() < 2) {
        throw std::invalid_argument("depth_score: needs at least two heights");
    }
    const auto [min_it, max_it] = std::minmax_element(heights.begin(), heights.end());
    const double midrange = (*max_it + *min_it) / 2.0;
    const double average =
        std::accumulate(heights.begin(), heights.end(), 0.0) / static_cast<double>(heights.size());
    return std::abs(average - midrange) / midrange;
}

bool classify_depth(std::span<const std::vector<double>> sample_heights, double threshold) {
    double sum = 0.0;
    std::size_t usable = 0;
    for (const auto& heights : sample_heights) {
        if (heights.size() < 2) {
            continue;
        }
        sum += depth_score(heights);
        ++usable;
    }
    if (usable == 0) {
        return false;
    }
    return sum / static_cast<double>(usable) > threshold;
}

std::vector<int> sample_frame_indices(int total_frames, int samples) {
    std::vector<int> indices;
    if (total_frames < 2 || samples <= 0) {
        return indices;
    }
    for (int k = 0; k < samples; ++k) {
        const int idx = static_cast<int>(static_cast<long long>(k) * (total_frames - 1) / samples);
        // Pair (idx, idx + 1) must fit inside the video.
        indices.push_back(std::min(idx, total_frames - 2));
    }
    return indices;
}

}  // namespace sfsort

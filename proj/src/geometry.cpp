#include "sfsort/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace sfsort {

namespace {

struct Overlap {
    double w;  // horizontal intersection extent
    double h;  // vertical intersection extent
};

Overlap intersection_extents(const BoundingBox& a, const BoundingBox& b) {
    const double w = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
    const double h = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
    return {std::max(0.0, w), std::max(0.0, h)};
}

struct Enclosure {
    double w;
    double h;
};

Enclosure enclosing_extents(const BoundingBox& a, const BoundingBox& b) {
    return {std::max(a.x2, b.x2) - std::min(a.x1, b.x1),
            std::max(a.y2, b.y2) - std::min(a.y1, b.y1)};
}

}  // namespace

double iou(const BoundingBox& a, const BoundingBox& b) {
    const Overlap o = intersection_extents(a, b);
    const double inter = o.w * o.h;
    const double uni = a.area() + b.area() - inter;
    if (uni <= 0.0) {
        return 0.0;
    }
    return inter / uni;
}

double giou(const BoundingBox& a, const BoundingBox& b) {
    const Enclosure c = enclosing_extents(a, b);
    const double enclosing_area = c.w * c.h;
    if (enclosing_area <= 0.0) {
        // Both boxes collapsed onto the same degenerate point.
        return 0.0;
    }
    const Overlap o = intersection_extents(a, b);
    const double uni = a.area() + b.area() - o.w * o.h;
    return iou(a, b) - (enclosing_area - uni) / enclosing_area;
}

double diou(const BoundingBox& a, const BoundingBox& b) {
    const Enclosure c = enclosing_extents(a, b);
    const double denom = c.h * c.h + c.w * c.w;
    const double overlap = iou(a, b);
    if (denom <= 0.0) {
        return overlap;
    }
    const auto [ax, ay] = a.center();
    const auto [bx, by] = b.center();
    const double d2 = (ax - bx) * (ax - bx) + (ay - by) * (ay - by);
    return overlap - d2 / denom;
}

double eiou(const BoundingBox& a, const BoundingBox& b) {
    const Enclosure c = enclosing_extents(a, b);
    double value = diou(a, b);
    const double dh = a.height() - b.height();
    const double dw = a.width() - b.width();
    if (c.h > 0.0) {
        value -= (dh * dh) / (c.h * c.h);
    }
    if (c.w > 0.0) {
        value -= (dw * dw) / (c.w * c.w);
    }
    return value;
}

double bbsi(const BoundingBox& a, const BoundingBox& b) {
    const Overlap o = intersection_extents(a, b);
    const Enclosure c = enclosing_extents(a, b);

    const double s_h = o.h / (o.h + std::abs(a.height() - b.height()) + kBbsiEpsilon);
    const double s_w = o.w / (o.w + std::abs(a.width() - b.width()) + kBbsiEpsilon);

    const auto [ax, ay] = a.center();
    const auto [bx, by] = b.center();
    const double span = c.h + c.w;
    const double s_c = span > 0.0 ? (std::abs(ax - bx) + std::abs(ay - by)) / span : 0.0;

    const double adiou = iou(a, b) - s_c;
    return adiou + s_h + s_w;
}

double cost_first(const BoundingBox& a, const BoundingBox& b) {
    return 1.0 - bbsi(a, b) / 3.0;
}

double cost_second(const BoundingBox& a, const BoundingBox& b) {
    return 1.0 - iou(a, b);
}

Eigen::MatrixXd cost_matrix(std::span<const BoundingBox> tracks,
                            std::span<const BoundingBox> detections,
                            CostKind kind) {
    Eigen::MatrixXd costs(static_cast<Eigen::Index>(tracks.size()),
                          static_cast<Eigen::Index>(detections.size()));
    const auto cost_of = [kind](const BoundingBox& t, const BoundingBox& d) {
        switch (kind) {
            case CostKind::First:
                return cost_first(t, d);
            case CostKind::Second:
            case CostKind::Iou:
                return cost_second(t, d);
            case CostKind::Giou:
                return 1.0 - giou(t, d);
            case CostKind::Diou:
                return 1.0 - diou(t, d);
            case CostKind::Eiou:
                return 1.0 - eiou(t, d);
        }
        return 0.0;
    };
    for (std::size_t i = 0; i < tracks.size(); ++i) {
        for (std::size_t j = 0; j < detections.size(); ++j) {
            costs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                cost_of(tracks[i], detections[j]);
        }
    }
    return costs;
}

}  // namespace sfsort

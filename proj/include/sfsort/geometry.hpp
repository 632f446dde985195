#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace sfsort {

/**
 * Axis-aligned bounding box in pixel coordinates, corner form.
 * Image convention: x grows rightward, y grows downward, so (x1, y1) is the
 * top-left corner and (x2, y2) the bottom-right one. Degenerate boxes with
 * zero width or height are allowed; negative extents are rejected.
 */
struct BoundingBox {
    double x1 = 0.0;
    double y1 = 0.0;
    double x2 = 0.0;
    double y2 = 0.0;

    BoundingBox() = default;

    BoundingBox(double x1_, double y1_, double x2_, double y2_)
        : x1(x1_), y1(y1_), x2(x2_), y2(y2_) {
        if (x2 < x1 || y2 < y1) {
            throw std::invalid_argument("BoundingBox: negative extent");
        }
    }

    /// Build from MOT-style (left, top, width, height).
    static BoundingBox from_tlwh(double left, double top, double width, double height) {
        return BoundingBox(left, top, left + width, top + height);
    }

    double width() const { return x2 - x1; }
    double height() const { return y2 - y1; }
    double area() const { return width() * height(); }
    std::pair<double, double> center() const { return {(x1 + x2) / 2.0, (y1 + y2) / 2.0}; }

    bool operator==(const BoundingBox&) const = default;
};

/// Intersection over union, in [0, 1]. Two zero-area boxes give 0.
double iou(const BoundingBox& a, const BoundingBox& b);

/// Generalized IoU: IoU minus the normalized empty area of the smallest
/// enclosing rectangle. Range (-1, 1].
double giou(const BoundingBox& a, const BoundingBox& b);

/// Distance IoU: IoU minus the squared center distance normalized by the
/// squared diagonal extents of the enclosing rectangle. Range (-1, 1].
double diou(const BoundingBox& a, const BoundingBox& b);

/// Extended IoU: DIoU minus height/width difference penalties, each
/// normalized by the corresponding enclosing-rectangle extent.
double eiou(const BoundingBox& a, const BoundingBox& b);

/**
 * Bounding Box Similarity Index, range (-1, 3].
 *
 * BBSI = ADIoU + S_h + S_w, where ADIoU approximates DIoU with a
 * Manhattan-normalized center term (S_c), and S_h / S_w measure height and
 * width similarity built from the vertical and horizontal extents of the
 * intersection. Scores 3 for identical boxes (up to epsilon) and stays
 * meaningful for disjoint ones, which is what lets the tracker skip motion
 * prediction entirely.
 */
double bbsi(const BoundingBox& a, const BoundingBox& b);

/// First-association cost: 1 - BBSI/3. Near 0 for identical boxes.
double cost_first(const BoundingBox& a, const BoundingBox& b);

/// Second-association cost: 1 - IoU, in [0, 1].
double cost_second(const BoundingBox& a, const BoundingBox& b);

/// Epsilon used in the S_h / S_w similarity ratios.
inline constexpr double kBbsiEpsilon = 1e-7;

/// Cost flavor used when building an association cost matrix.
enum class CostKind {
    First,   // 1 - BBSI/3 (default first stage)
    Second,  // 1 - IoU (default second stage)
    Iou,     // 1 - IoU
    Giou,    // 1 - GIoU
    Diou,    // 1 - DIoU
    Eiou,    // 1 - EIoU
};

/**
 * Builds the association cost matrix, rows = tracks, cols = detections.
 * Every kind yields nonnegative costs (each descriptor is bounded by 1).
 * Either list may be empty, producing a 0xN or Mx0 matrix.
 */
Eigen::MatrixXd cost_matrix(std::span<const BoundingBox> tracks,
                            std::span<const BoundingBox> detections,
                            CostKind kind);

}  // namespace sfsort

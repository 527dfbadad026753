#pragma once

#include "lsm/tensor.hpp"

#include <utility>

namespace lsm {

/// Seven-parameter affine motion model. Angles are in degrees; composition
/// order is fixed: scale, then shear, then rotate, then translate, all about
/// the image center.
struct AffineParams {
    double tx = 0.0;
    double ty = 0.0;
    double sx = 1.0;
    double sy = 1.0;
    double shx = 0.0;
    double shy = 0.0;
    double rot = 0.0;

    bool is_identity() const;
};

/// Row-major 2x3 matrix mapping source coordinates to destination
/// coordinates: dst = A * src + b with A = [[m00 m01],[m10 m11]], b = (m02, m12).
struct Mat2x3 {
    double m[2][3] = {{1, 0, 0}, {0, 1, 0}};

    std::pair<double, double> apply(double x, double y) const {
        return {m[0][0] * x + m[0][1] * y + m[0][2],
                m[1][0] * x + m[1][1] * y + m[1][2]};
    }

    /// Inverse affine map. Throws if the linear part is singular.
    Mat2x3 inverse() const;
};

/// Source-to-destination map for the given parameters about (cx, cy).
Mat2x3 affine_matrix(const AffineParams& p, double cx, double cy);

struct WarpResult {
    Tensor image;
    MotionField motion; // per destination pixel: displacement from source
};

/// Inverse-mapped bilinear warp of every channel. Destination pixels whose
/// source location falls outside the image are zero-filled and marked
/// invalid in the motion field.
WarpResult warp_image(const Tensor& img, const Mat2x3& m);
WarpResult warp_image(const Tensor& img, const AffineParams& p);

/// Bilinear read at (x, y) in channel c. Pre: 0 <= x <= W-1, 0 <= y <= H-1.
/// Exact (bit-identical) copy when x and y are integers.
float bilinear_sample(const Tensor& t, int c, double x, double y);

} // namespace lsm

#include "lsm/affine.hpp"

#include <cmath>
#include <stdexcept>

namespace lsm {

namespace {
constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
}

bool AffineParams::is_identity() const {
    return tx == 0.0 && ty == 0.0 && sx == 1.0 && sy == 1.0 && shx == 0.0 &&
           shy == 0.0 && rot == 0.0;
}

Mat2x3 Mat2x3::inverse() const {
    const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if (std::abs(det) < 1e-12) {
        throw std::invalid_argument("Mat2x3: singular matrix");
    }
    Mat2x3 inv;
    inv.m[0][0] = m[1][1] / det;
    inv.m[0][1] = -m[0][1] / det;
    inv.m[1][0] = -m[1][0] / det;
    inv.m[1][1] = m[0][0] / det;
    inv.m[0][2] = -(inv.m[0][0] * m[0][2] + inv.m[0][1] * m[1][2]);
    inv.m[1][2] = -(inv.m[1][0] * m[0][2] + inv.m[1][1] * m[1][2]);
    return inv;
}

Mat2x3 affine_matrix(const AffineParams& p, double cx, double cy) {
    if (p.sx <= 0.0 || p.sy <= 0.0) {
        throw std::invalid_argument("affine_matrix: scale factors must be positive");
    }
    // Linear part A = R * Sh * S applied about the center:
    //   dst = A * (src - c) + c + t
    const double cr = std::cos(p.rot * kDegToRad);
    const double sr = std::sin(p.rot * kDegToRad);
    const double hx = std::tan(p.shx * kDegToRad);
    const double hy = std::tan(p.shy * kDegToRad);
    // Sh * S
    const double s00 = p.sx, s01 = hx * p.sy;
    const double s10 = hy * p.sx, s11 = p.sy;
    // R * (Sh * S)
    const double a00 = cr * s00 - sr * s10;
    const double a01 = cr * s01 - sr * s11;
    const double a10 = sr * s00 + cr * s10;
    const double a11 = sr * s01 + cr * s11;
    Mat2x3 m;
    m.m[0][0] = a00;
    m.m[0][1] = a01;
    m.m[1][0] = a10;
    m.m[1][1] = a11;
    m.m[0][2] = cx - (a00 * cx + a01 * cy) + p.tx;
    m.m[1][2] = cy - (a10 * cx + a11 * cy) + p.ty;
    return m;
}

float bilinear_sample(const Tensor& t, int c, double x, double y) {
    int x0 = static_cast<int>(std::floor(x));
    int y0 = static_cast<int>(std::floor(y));
    double fx = x - x0;
    double fy = y - y0;
    // Keep the 2x2 support inside the image at the far edges.
    if (x0 >= t.width() - 1) {
        x0 = t.width() - 1;
        fx = 0.0;
    }
    if (y0 >= t.height() - 1) {
        y0 = t.height() - 1;
        fy = 0.0;
    }
    const double v00 = t.at(c, y0, x0);
    const double v01 = fx > 0.0 ? t.at(c, y0, x0 + 1) : 0.0;
    const double v10 = fy > 0.0 ? t.at(c, y0 + 1, x0) : 0.0;
    const double v11 = (fx > 0.0 && fy > 0.0) ? t.at(c, y0 + 1, x0 + 1) : 0.0;
    const double v = (1.0 - fy) * ((1.0 - fx) * v00 + fx * v01) +
                     fy * ((1.0 - fx) * v10 + fx * v11);
    return static_cast<float>(v);
}

WarpResult warp_image(const Tensor& img, const Mat2x3& m) {
    const Mat2x3 inv = m.inverse();
    WarpResult res{Tensor(img.channels(), img.height(), img.width(), 0.0f),
                   MotionField(img.height(), img.width())};
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            const auto [sx, sy] = inv.apply(x, y);
            const std::size_t i = res.motion.index(y, x);
            res.motion.vx[i] = static_cast<float>(x - sx);
            res.motion.vy[i] = static_cast<float>(y - sy);
            const bool ok = sx >= 0.0 && sx <= img.width() - 1.0 &&
                            sy >= 0.0 && sy <= img.height() - 1.0;
            res.motion.valid[i] = ok ? 1 : 0;
            if (ok) {
                for (int c = 0; c < img.channels(); ++c) {
                    res.image.at(c, y, x) = bilinear_sample(img, c, sx, sy);
                }
            }
        }
    }
    return res;
}

WarpResult warp_image(const Tensor& img, const AffineParams& p) {
    return warp_image(img, affine_matrix(p, (img.width() - 1) / 2.0,
                                         (img.height() - 1) / 2.0));
}

} // namespace lsm

#include "lsm/block_match.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace lsm {

namespace {

void validate(const Tensor& reference, const Tensor& target, const BlockMatchConfig& cfg) {
    if (!reference.same_shape(target)) {
        throw std::invalid_argument("estimate_motion: reference/target shapes differ");
    }
    if (cfg.block < 1 || cfg.block % 2 == 0) {
        throw std::invalid_argument("estimate_motion: block size must be odd and >= 1");
    }
    if (cfg.range < 0) {
        throw std::invalid_argument("estimate_motion: search range must be >= 0");
    }
    if (cfg.block > reference.height() || cfg.block > reference.width()) {
        throw std::invalid_argument("estimate_motion: block larger than image");
    }
}

} // namespace

MotionField estimate_motion(const Tensor& reference, const Tensor& target,
                            const BlockMatchConfig& cfg) {
    validate(reference, target, cfg);
    if (reference.channels() != 1) {
        throw std::invalid_argument("estimate_motion: expects single-channel tensors");
    }
    const int h = target.height();
    const int w = target.width();
    const int hb = (cfg.block - 1) / 2;
    const int r = cfg.range;
    MotionField field(h, w);

    for (int y = 0; y < h; ++y) {
        // Block rows available around (y, *) in the target.
        const int tuy_lo = std::max(-hb, -y);
        const int tuy_hi = std::min(hb, h - 1 - y);
        for (int x = 0; x < w; ++x) {
            const int tux_lo = std::max(-hb, -x);
            const int tux_hi = std::min(hb, w - 1 - x);

            double best_cost = std::numeric_limits<double>::infinity();
            int best_dy = 0, best_dx = 0;
            long long best_d2 = 0;
            bool found = false;

            for (int dy = -r; dy <= r; ++dy) {
                const int uy_lo = std::max(tuy_lo, -y - dy);
                const int uy_hi = std::min(tuy_hi, h - 1 - y - dy);
                if (uy_lo > uy_hi) continue;
                for (int dx = -r; dx <= r; ++dx) {
                    const int ux_lo = std::max(tux_lo, -x - dx);
                    const int ux_hi = std::min(tux_hi, w - 1 - x - dx);
                    if (ux_lo > ux_hi) continue;

                    double ssd = 0.0;
                    for (int uy = uy_lo; uy <= uy_hi; ++uy) {
                        for (int ux = ux_lo; ux <= ux_hi; ++ux) {
                            const double d = static_cast<double>(target.at(0, y + uy, x + ux)) -
                                             static_cast<double>(reference.at(0, y + dy + uy, x + dx + ux));
                            ssd += d * d;
                        }
                    }
                    const long long count = static_cast<long long>(uy_hi - uy_lo + 1) *
                                            (ux_hi - ux_lo + 1);
                    const double cost = ssd / static_cast<double>(count);
                    const long long d2 = static_cast<long long>(dx) * dx +
                                         static_cast<long long>(dy) * dy;
                    const bool better =
                        !found || cost < best_cost ||
                        (cost == best_cost &&
                         (d2 < best_d2 ||
                          (d2 == best_d2 &&
                           (dy < best_dy || (dy == best_dy && dx < best_dx)))));
                    if (better) {
                        best_cost = cost;
                        best_dy = dy;
                        best_dx = dx;
                        best_d2 = d2;
                        found = true;
                    }
                }
            }

            const std::size_t i = field.index(y, x);
            if (found) {
                // Matched reference position is pixel + d, so the content
                // moved by -d from reference to target.
                field.vx[i] = static_cast<float>(-best_dx);
                field.vy[i] = static_cast<float>(-best_dy);
                field.valid[i] = 1;
            } else {
                field.vx[i] = 0.0f;
                field.vy[i] = 0.0f;
                field.valid[i] = 0;
            }
        }
    }
    return field;
}

std::vector<MotionField> estimate_motion_multichannel(const Tensor& reference,
                                                      const Tensor& target,
                                                      const BlockMatchConfig& cfg) {
    validate(reference, target, cfg);
    std::vector<MotionField> fields;
    fields.reserve(reference.channels());
    for (int c = 0; c < reference.channels(); ++c) {
        fields.push_back(estimate_motion(reference.channel(c), target.channel(c), cfg));
    }
    return fields;
}

void write_motion_csv(std::ostream& out, const MotionField& field) {
    out << "x,y,vx,vy,valid\n";
    char buf[128];
    for (int y = 0; y < field.height; ++y) {
        for (int x = 0; x < field.width; ++x) {
            const std::size_t i = field.index(y, x);
            std::snprintf(buf, sizeof(buf), "%d,%d,%.9g,%.9g,%d\n", x, y,
                          static_cast<double>(field.vx[i]), static_cast<double>(field.vy[i]),
                          field.valid[i] ? 1 : 0);
            out << buf;
        }
    }
}

} // namespace lsm

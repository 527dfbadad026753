#include "lsm/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace lsm {

std::string MetricsReport::csv_header() { return "nrmse,rmse,range,n_valid,n_excluded"; }

std::string MetricsReport::csv_row() const {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g,%zu,%zu", nrmse, rmse, range,
                  n_valid, n_excluded);
    return buf;
}

MetricsReport nrmse(const Tensor& predicted, const Tensor& actual, const Mask& mask) {
    if (!predicted.same_shape(actual)) {
        throw std::invalid_argument("nrmse: predicted/actual shapes differ");
    }
    if (mask.height != actual.height() || mask.width != actual.width()) {
        throw std::invalid_argument("nrmse: mask dims do not match tensor");
    }
    double sum_sq = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    std::size_t n = 0;
    for (int c = 0; c < actual.channels(); ++c) {
        for (int y = 0; y < actual.height(); ++y) {
            for (int x = 0; x < actual.width(); ++x) {
                if (!mask.at(y, x)) continue;
                const double a = actual.at(c, y, x);
                const double p = predicted.at(c, y, x);
                const double d = p - a;
                sum_sq += d * d;
                lo = std::min(lo, a);
                hi = std::max(hi, a);
                ++n;
            }
        }
    }
    if (n == 0) throw std::runtime_error("nrmse: mask excludes every element");
    MetricsReport rep;
    rep.n_valid = n;
    rep.n_excluded = actual.size() - n;
    rep.rmse = std::sqrt(sum_sq / static_cast<double>(n));
    rep.range = hi - lo;
    if (rep.range > 0.0) {
        rep.nrmse = rep.rmse / rep.range;
    } else if (rep.rmse == 0.0) {
        rep.nrmse = 0.0;
    } else {
        throw std::runtime_error("nrmse: zero dynamic range with nonzero error");
    }
    return rep;
}

MetricsReport nrmse(const Tensor& predicted, const Tensor& actual) {
    return nrmse(predicted, actual, Mask(actual.height(), actual.width(), true));
}

double psnr_to_nrmse(double psnr_db) {
    return std::sqrt(255.0 * 255.0 / std::pow(10.0, psnr_db / 10.0)) / 256.0;
}

} // namespace lsm

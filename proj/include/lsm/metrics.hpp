#pragma once

#include "lsm/tensor.hpp"

#include <string>

namespace lsm {

struct MetricsReport {
    double nrmse = 0.0;
    double rmse = 0.0;
    double range = 0.0; // dynamic range R of the actual tensor over valid elements
    std::size_t n_valid = 0;
    std::size_t n_excluded = 0;

    /// One CSV row: nrmse,rmse,range,n_valid,n_excluded.
    std::string csv_row() const;
    static std::string csv_header();
};

/// NRMSE of `predicted` against `actual` over the elements whose spatial
/// position is on in `mask` (all channels pooled). R is max-min of the
/// actual values over those elements. R == 0 with zero error yields nrmse 0;
/// R == 0 with nonzero error is a degenerate-range error.
MetricsReport nrmse(const Tensor& predicted, const Tensor& actual, const Mask& mask);
MetricsReport nrmse(const Tensor& predicted, const Tensor& actual);

/// NRMSE equivalent of a luminance PSNR value (8-bit range):
/// (1/256) * sqrt(255^2 / 10^(psnr/10)).
double psnr_to_nrmse(double psnr_db);

} // namespace lsm

#include "lsm/metrics.hpp"

#include "lsm/rng.hpp"

#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace lsm;

namespace {

// Independent one-pass evaluation of the NRMSE definition: a plain loop over
// (value, valid) pairs, no shared code with the implementation.
double nrmse_oracle(const std::vector<float>& predicted, const std::vector<float>& actual,
                    const std::vector<bool>& valid_per_element) {
    double sq = 0.0, lo = 1e300, hi = -1e300;
    std::size_t n = 0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        if (!valid_per_element[i]) continue;
        sq += (predicted[i] - actual[i]) * (double)(predicted[i] - actual[i]);
        lo = std::min(lo, (double)actual[i]);
        hi = std::max(hi, (double)actual[i]);
        ++n;
    }
    return std::sqrt(sq / n) / (hi - lo);
}

} // namespace

TEST_SUITE("metrics") {

TEST_CASE("exact prediction gives zero") {
    Tensor a(2, 3, 3, 1.25f);
    a.at(1, 2, 2) = -4.0f;
    MetricsReport rep = nrmse(a, a);
    CHECK(rep.nrmse == 0.0);
    CHECK(rep.rmse == 0.0);
    CHECK(rep.n_valid == a.size());
    CHECK(rep.n_excluded == 0);
}

TEST_CASE("hand-computed case") {
    // actual [0,2,0,2], predicted [1,1,1,1]: RMSE 1, R 2, NRMSE 0.5
    Tensor actual(1, 1, 4);
    actual.at(0, 0, 0) = 0.0f;
    actual.at(0, 0, 1) = 2.0f;
    actual.at(0, 0, 2) = 0.0f;
    actual.at(0, 0, 3) = 2.0f;
    Tensor predicted(1, 1, 4, 1.0f);
    MetricsReport rep = nrmse(predicted, actual);
    CHECK(rep.rmse == doctest::Approx(1.0));
    CHECK(rep.range == doctest::Approx(2.0));
    CHECK(rep.nrmse == doctest::Approx(0.5));
}

TEST_CASE("zero range rules") {
    Tensor constant(1, 2, 2, 3.0f);
    MetricsReport rep = nrmse(constant, constant);
    CHECK(rep.nrmse == 0.0); // R = 0 with zero error

    Tensor off(1, 2, 2, 3.5f);
    CHECK_THROWS_AS(nrmse(off, constant), std::runtime_error);
}

TEST_CASE("all-invalid mask rejected") {
    Tensor t(1, 2, 2, 1.0f);
    CHECK_THROWS_AS(nrmse(t, t, Mask(2, 2, false)), std::runtime_error);
    CHECK_THROWS_AS(nrmse(t, t, Mask(3, 2, true)), std::invalid_argument);
}

TEST_CASE("masked elements are excluded") {
    Tensor actual(2, 2, 2, 1.0f);
    actual.at(0, 0, 0) = 5.0f; // masked out below
    actual.at(0, 1, 1) = 2.0f;
    Tensor predicted = actual;
    predicted.at(1, 0, 0) = 99.0f; // also masked out
    Mask m(2, 2, true);
    m.set(0, 0, false);
    MetricsReport rep = nrmse(predicted, actual, m);
    CHECK(rep.nrmse == 0.0);
    CHECK(rep.n_valid == 6);
    CHECK(rep.n_excluded == 2);
    CHECK(rep.range == doctest::Approx(1.0)); // max 2, min 1 over valid
}

TEST_CASE("matches independent one-pass oracle") {
    SplitMix64 rng(99);
    for (int iter = 0; iter < 10; ++iter) {
        const int h = 3 + static_cast<int>(rng.next() % 5);
        const int w = 3 + static_cast<int>(rng.next() % 5);
        Tensor actual(2, h, w), predicted(2, h, w);
        Mask mask(h, w, true);
        for (float& v : actual.data()) v = static_cast<float>(rng.uniform(-5, 5));
        for (float& v : predicted.data()) v = static_cast<float>(rng.uniform(-5, 5));
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                if (rng.uniform01() < 0.25) mask.set(y, x, false);
            }
        }
        if (mask.count_on() == 0) mask.set(0, 0, true);

        std::vector<float> p(predicted.data().begin(), predicted.data().end());
        std::vector<float> a(actual.data().begin(), actual.data().end());
        std::vector<bool> valid(a.size());
        for (int c = 0; c < 2; ++c) {
            for (int y = 0; y < h; ++y) {
                for (int x = 0; x < w; ++x) {
                    valid[(static_cast<std::size_t>(c) * h + y) * w + x] = mask.at(y, x);
                }
            }
        }
        MetricsReport rep = nrmse(predicted, actual, mask);
        CHECK(rep.nrmse == doctest::Approx(nrmse_oracle(p, a, valid)).epsilon(1e-7));
    }
}

TEST_CASE("invariant under common permutation") {
    SplitMix64 rng(3);
    Tensor actual(1, 4, 4), predicted(1, 4, 4);
    for (float& v : actual.data()) v = static_cast<float>(rng.uniform(-2, 2));
    for (float& v : predicted.data()) v = static_cast<float>(rng.uniform(-2, 2));
    const double base = nrmse(predicted, actual).nrmse;

    std::vector<int> perm(16);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = 15; i > 0; --i) {
        std::swap(perm[i], perm[rng.next() % (i + 1)]);
    }
    Tensor pa(1, 4, 4), pp(1, 4, 4);
    for (int i = 0; i < 16; ++i) {
        pa.data()[i] = actual.data()[perm[i]];
        pp.data()[i] = predicted.data()[perm[i]];
    }
    CHECK(nrmse(pp, pa).nrmse == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("psnr conversion endpoints") {
    // 27 dB and 41 dB bracket the reported range 0.009-0.044.
    CHECK(psnr_to_nrmse(27.0) > 0.0440);
    CHECK(psnr_to_nrmse(27.0) < 0.0450);
    CHECK(psnr_to_nrmse(41.0) > 0.0085);
    CHECK(psnr_to_nrmse(41.0) < 0.0093);
}

TEST_CASE("psnr conversion is strictly decreasing") {
    CHECK(psnr_to_nrmse(30.0) > psnr_to_nrmse(40.0));
    for (double p = 0.0; p < 60.0; p += 7.0) {
        CHECK(psnr_to_nrmse(p) > psnr_to_nrmse(p + 1.0));
    }
}

TEST_CASE("psnr conversion ratio identity") {
    const double ratio = psnr_to_nrmse(27.0) / psnr_to_nrmse(41.0);
    CHECK(std::abs(ratio - std::pow(10.0, 14.0 / 20.0)) < 1e-9);
}

TEST_CASE("csv row format") {
    MetricsReport rep;
    rep.nrmse = 0.5;
    rep.rmse = 1.0;
    rep.range = 2.0;
    rep.n_valid = 6;
    rep.n_excluded = 2;
    CHECK(rep.csv_row() == "0.5,1,2,6,2");
    CHECK(MetricsReport::csv_header() == "nrmse,rmse,range,n_valid,n_excluded");
}

} // TEST_SUITE

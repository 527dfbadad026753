#include "lsm/latent_mc.hpp"

#include "lsm/experiment.hpp"
#include "lsm/metrics.hpp"
#include "lsm/rng.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>

using namespace lsm;

namespace {

MotionField constant_field(int h, int w, float vx, float vy) {
    MotionField f(h, w);
    for (std::size_t i = 0; i < f.vx.size(); ++i) {
        f.vx[i] = vx;
        f.vy[i] = vy;
    }
    return f;
}

struct Fixture {
    NetworkSpec net = make_toy_net(3);
    WeightStore weights = seeded_weights(net, 1);
    Tensor image = synth_texture(3, 64, 64, 42);
};

double masked_nrmse(const EndToEndResult& res, const NetworkSpec& net, const Tensor& img) {
    const int border = padding_border_cells(net, img.height(), img.width());
    const MotionField latent = scale_motion(res.input_motion, res.prediction.scale);
    const Mask m = interior_mask(res.prediction.valid, latent, border);
    return nrmse(res.prediction.predicted, res.actual, m).nrmse;
}

} // namespace

TEST_SUITE("latent-mc") {

TEST_CASE("scale_motion divides vectors and shrinks the grid") {
    MotionField f = constant_field(64, 64, 8.0f, 0.0f);
    MotionField s = scale_motion(f, 8.0);
    CHECK(s.height == 8);
    CHECK(s.width == 8);
    for (std::size_t i = 0; i < s.vx.size(); ++i) {
        CHECK(s.vx[i] == 1.0f);
        CHECK(s.vy[i] == 0.0f);
        CHECK(s.valid[i] == 1);
    }

    MotionField g = constant_field(10, 10, -4.0f, 6.0f);
    MotionField h = scale_motion(g, 2.0);
    CHECK(h.vx[0] == -2.0f);
    CHECK(h.vy[0] == 3.0f);
}

TEST_CASE("scale one is the identity") {
    SplitMix64 rng(4);
    MotionField f(6, 7);
    for (std::size_t i = 0; i < f.vx.size(); ++i) {
        f.vx[i] = static_cast<float>(rng.uniform(-3, 3));
        f.vy[i] = static_cast<float>(rng.uniform(-3, 3));
        f.valid[i] = rng.uniform01() < 0.8;
    }
    MotionField s = scale_motion(f, 1.0);
    CHECK(s.vx == f.vx);
    CHECK(s.vy == f.vy);
    CHECK(s.valid == f.valid);
}

TEST_CASE("scale_motion is linear in the field") {
    SplitMix64 rng(5);
    MotionField f(16, 16);
    for (std::size_t i = 0; i < f.vx.size(); ++i) {
        f.vx[i] = static_cast<float>(rng.uniform(-8, 8));
        f.vy[i] = static_cast<float>(rng.uniform(-8, 8));
    }
    const float alpha = 0.5f; // exact in binary so scaling commutes bit-exactly
    MotionField scaled_first = scale_motion(f, 4.0);
    MotionField g = f;
    for (std::size_t i = 0; i < g.vx.size(); ++i) {
        g.vx[i] *= alpha;
        g.vy[i] *= alpha;
    }
    MotionField scaled_after = scale_motion(g, 4.0);
    for (std::size_t i = 0; i < scaled_after.vx.size(); ++i) {
        CHECK(scaled_after.vx[i] == alpha * scaled_first.vx[i]);
        CHECK(scaled_after.vy[i] == alpha * scaled_first.vy[i]);
    }
}

TEST_CASE("validity is inherited from the sampled input position") {
    MotionField f = constant_field(16, 16, 0.0f, 0.0f);
    // Invalidate the left quarter of the input grid.
    for (int y = 0; y < 16; ++y) {
        for (int x = 0; x < 4; ++x) f.valid[f.index(y, x)] = 0;
    }
    MotionField s = scale_motion(f, 8.0);
    REQUIRE(s.width == 2);
    // Latent column 0 samples input column 4 (center-aligned): invalid band
    // covers columns 0..3, so the sample itself is just outside it.
    CHECK(s.valid[s.index(0, 0)] == 1);

    for (int y = 0; y < 16; ++y) {
        for (int x = 0; x < 6; ++x) f.valid[f.index(y, x)] = 0;
    }
    MotionField s2 = scale_motion(f, 8.0);
    CHECK(s2.valid[s2.index(0, 0)] == 0);
    CHECK(s2.valid[s2.index(0, 1)] == 1);
}

TEST_CASE("zero motion predicts the reference bit-exactly") {
    Tensor ref = synth_texture(4, 8, 8, 13);
    MotionField none = constant_field(64, 64, 0.0f, 0.0f);
    LatentPrediction pred = predict_tensor(ref, none, 8.0);
    CHECK(pred.scale == 8.0);
    CHECK(pred.valid.count_on() == 64);
    for (std::size_t i = 0; i < ref.size(); ++i) {
        CHECK(pred.predicted.data()[i] == ref.data()[i]);
    }
}

TEST_CASE("integer latent shift moves columns and masks the entry column") {
    Tensor ref = synth_texture(2, 8, 8, 3);
    MotionField f = constant_field(64, 64, 8.0f, 0.0f);
    // Mark the 8-px entry band invalid, as a warp would.
    for (int y = 0; y < 64; ++y) {
        for (int x = 0; x < 8; ++x) f.valid[f.index(y, x)] = 0;
    }
    LatentPrediction pred = predict_tensor(ref, f, 8.0);
    for (int y = 0; y < 8; ++y) {
        CHECK_FALSE(pred.valid.at(y, 0));
        for (int x = 1; x < 8; ++x) {
            CHECK(pred.valid.at(y, x));
            for (int c = 0; c < 2; ++c) {
                CHECK(pred.predicted.at(c, y, x) == ref.at(c, y, x - 1));
            }
        }
    }
}

TEST_CASE("vectors at invalid positions are ignored by consumers") {
    Tensor ref = synth_texture(2, 8, 8, 17);
    MotionField clean = constant_field(64, 64, 8.0f, 0.0f);
    MotionField junk = clean;
    for (int y = 0; y < 64; ++y) {
        for (int x = 0; x < 8; ++x) {
            const std::size_t i = junk.index(y, x);
            clean.valid[i] = 0;
            junk.valid[i] = 0;
            junk.vx[i] = 1e9f; // garbage that must never be read
            junk.vy[i] = -1e9f;
        }
    }
    LatentPrediction a = predict_tensor(ref, clean, 8.0);
    LatentPrediction b = predict_tensor(ref, junk, 8.0);
    CHECK(a.valid.on == b.valid.on);
    for (std::size_t i = 0; i < a.predicted.size(); ++i) {
        CHECK(a.predicted.data()[i] == b.predicted.data()[i]);
    }
    MotionField sa = scale_motion(clean, 8.0);
    MotionField sb = scale_motion(junk, 8.0);
    CHECK(sa.valid == sb.valid);
    for (std::size_t i = 0; i < sa.valid.size(); ++i) {
        if (sa.valid[i]) {
            CHECK(sa.vx[i] == sb.vx[i]);
            CHECK(sa.vy[i] == sb.vy[i]);
        }
    }
}

TEST_CASE("grid mismatch is rejected") {
    Tensor ref = synth_texture(1, 8, 8, 1);
    MotionField f = constant_field(60, 64, 0.0f, 0.0f); // 60/8 != 8
    CHECK_THROWS_AS(predict_tensor(ref, f, 8.0), std::invalid_argument);
    CHECK_THROWS_AS(scale_motion(f, 0.5), std::invalid_argument);
}

TEST_CASE("identity transform predicts exactly") {
    Fixture fx;
    EndToEndResult res = end_to_end_predict(fx.net, fx.weights, fx.image, AffineParams{});
    MetricsReport rep = nrmse(res.prediction.predicted, res.actual,
                              res.prediction.valid);
    CHECK(rep.nrmse == 0.0);
    CHECK(rep.n_excluded == 0);
    CHECK(res.latent_grid.scale == 8.0);
    CHECK(res.latent_grid.height == 8);
}

TEST_CASE("stride-multiple translations predict bit-exactly on the interior") {
    Fixture fx;
    for (int m : {-2, -1, 1, 2}) {
        for (int l : {-1, 2}) {
            AffineParams p;
            p.tx = 8.0 * m;
            p.ty = 8.0 * l;
            EndToEndResult res = end_to_end_predict(fx.net, fx.weights, fx.image, p);
            CHECK(masked_nrmse(res, fx.net, fx.image) < 1e-4);
        }
    }
}

TEST_CASE("fractional latent shift is worse than integer") {
    Fixture fx;
    AffineParams four, eight;
    four.tx = 4.0;
    eight.tx = 8.0;
    EndToEndResult r4 = end_to_end_predict(fx.net, fx.weights, fx.image, four);
    EndToEndResult r8 = end_to_end_predict(fx.net, fx.weights, fx.image, eight);
    CHECK(masked_nrmse(r8, fx.net, fx.image) < masked_nrmse(r4, fx.net, fx.image));
}

TEST_CASE("translation nrmse has local minima exactly at multiples of the scale") {
    Fixture fx;
    std::vector<double> curve;
    for (int dx = 0; dx <= 16; ++dx) {
        AffineParams p;
        p.tx = dx;
        EndToEndResult res = end_to_end_predict(fx.net, fx.weights, fx.image, p);
        curve.push_back(masked_nrmse(res, fx.net, fx.image));
    }
    auto is_min = [&](std::size_t i) {
        const bool left = i == 0 || curve[i] < curve[i - 1];
        const bool right = i == curve.size() - 1 || curve[i] < curve[i + 1];
        return left && right;
    };
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const bool expected = i == 0 || i == 8 || i == 16;
        CHECK_MESSAGE(is_min(i) == expected, "dx=", i, " nrmse=", curve[i]);
    }
}

TEST_CASE("rotation produces a finite masked metric") {
    Fixture fx;
    AffineParams p;
    p.rot = 10.0;
    EndToEndResult res = end_to_end_predict(fx.net, fx.weights, fx.image, p);
    MetricsReport rep = nrmse(res.prediction.predicted, res.actual, res.prediction.valid);
    CHECK(std::isfinite(rep.nrmse));
    CHECK(rep.nrmse >= 0.0);
    CHECK(rep.n_valid > 0);
    CHECK(rep.n_excluded > 0); // corners rotate out of frame
}

TEST_CASE("tapping an earlier layer uses its scale") {
    Fixture fx;
    AffineParams p;
    p.tx = 4.0;
    // Layer 2 is the first max-pool: cumulative scale 2, so a 4-px shift is
    // an exact latent shift of 2 there.
    EndToEndResult res = end_to_end_predict(fx.net, fx.weights, fx.image, p, 2);
    CHECK(res.latent_grid.scale == 2.0);
    CHECK(res.actual.height() == 32);
    const int border = padding_border_cells(fx.net, 64, 64, 2);
    const MotionField latent = scale_motion(res.input_motion, 2.0);
    const Mask m = interior_mask(res.prediction.valid, latent, border);
    CHECK(nrmse(res.prediction.predicted, res.actual, m).nrmse < 1e-4);
}

TEST_CASE("padding border for the toy net at 64x64") {
    NetworkSpec net = make_toy_net(3);
    CHECK(padding_border_cells(net, 64, 64) == 1);
}

} // TEST_SUITE

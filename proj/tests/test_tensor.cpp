#include "lsm/tensor.hpp"
#include "lsm/tensor_io.hpp"

#include "lsm/rng.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cstring>
#include <filesystem>
#include <sstream>

using namespace lsm;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("lsm_test_" + name)).string();
}

bool bit_equal(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b)) return false;
    return std::memcmp(a.data().data(), b.data().data(), a.size() * sizeof(float)) == 0;
}

} // namespace

TEST_SUITE("tensor") {

TEST_CASE("fill construction") {
    Tensor t(1, 2, 2, 0.0f);
    CHECK(t.size() == 4);
    for (float v : t.data()) CHECK(v == 0.0f);

    Tensor ones(3, 224, 224, 1.0f);
    CHECK(ones.size() == 150528);
    CHECK(ones.at(2, 223, 223) == 1.0f);

    Tensor neg(2, 1, 1, -1.5f);
    CHECK(neg.size() == 2);
    CHECK(neg.at(0, 0, 0) == -1.5f);
    CHECK(neg.at(1, 0, 0) == -1.5f);
}

TEST_CASE("zero dimension rejected") {
    CHECK_THROWS_AS(Tensor(0, 2, 2), std::invalid_argument);
    CHECK_THROWS_AS(Tensor(1, 0, 2), std::invalid_argument);
    CHECK_THROWS_AS(Tensor(1, 2, 0), std::invalid_argument);
}

TEST_CASE("channel slicing") {
    Tensor single(1, 3, 3, 0.25f);
    CHECK(bit_equal(single.channel(0), single));

    // Stack known planes, then read each back.
    Tensor stacked(4, 2, 3);
    for (int c = 0; c < 4; ++c) {
        for (int y = 0; y < 2; ++y) {
            for (int x = 0; x < 3; ++x) {
                stacked.at(c, y, x) = static_cast<float>(100 * c + 10 * y + x);
            }
        }
    }
    for (int c = 0; c < 4; ++c) {
        Tensor plane = stacked.channel(c);
        CHECK(plane.channels() == 1);
        CHECK(plane.height() == 2);
        CHECK(plane.width() == 3);
        for (int y = 0; y < 2; ++y) {
            for (int x = 0; x < 3; ++x) {
                CHECK(plane.at(0, y, x) == static_cast<float>(100 * c + 10 * y + x));
            }
        }
        CHECK(bit_equal(plane.channel(0), plane)); // idempotent
    }
    CHECK_THROWS_AS(stacked.channel(4), std::invalid_argument);
    CHECK_THROWS_AS(stacked.channel(-1), std::invalid_argument);
}

TEST_CASE("lft1 round trip is bit exact") {
    SplitMix64 rng(2024);
    for (int iter = 0; iter < 8; ++iter) {
        const int c = 1 + static_cast<int>(rng.next() % 4);
        const int h = 1 + static_cast<int>(rng.next() % 9);
        const int w = 1 + static_cast<int>(rng.next() % 9);
        Tensor t(c, h, w);
        for (float& v : t.data()) v = static_cast<float>(rng.uniform(-1e6, 1e6));
        std::stringstream buf;
        write_lft1(buf, t);
        Tensor back = read_lft1(buf);
        CHECK(bit_equal(back, t));
    }
}

TEST_CASE("lft1 rejects garbage") {
    std::stringstream buf("not a tensor at all");
    CHECK_THROWS_AS(read_lft1(buf), std::runtime_error);
}

TEST_CASE("pgm and ppm round trip") {
    SplitMix64 rng(7);
    Tensor gray(1, 5, 9);
    for (float& v : gray.data()) v = static_cast<float>(rng.next() % 256);
    const std::string gpath = temp_path("gray.pgm");
    write_image(gpath, gray);
    CHECK(bit_equal(read_image(gpath), gray));

    Tensor rgb(3, 4, 6);
    for (float& v : rgb.data()) v = static_cast<float>(rng.next() % 256);
    const std::string cpath = temp_path("color.ppm");
    write_image(cpath, rgb);
    CHECK(bit_equal(read_image(cpath), rgb));
}

TEST_CASE("image write clamps and rounds") {
    Tensor t(1, 1, 3);
    t.at(0, 0, 0) = -12.0f;
    t.at(0, 0, 1) = 300.0f;
    t.at(0, 0, 2) = 99.6f;
    const std::string path = temp_path("clamp.pgm");
    write_image(path, t);
    Tensor back = read_image(path);
    CHECK(back.at(0, 0, 0) == 0.0f);
    CHECK(back.at(0, 0, 1) == 255.0f);
    CHECK(back.at(0, 0, 2) == 100.0f);
}

TEST_CASE("mask pgm export") {
    Mask m(2, 2, false);
    m.set(0, 1, true);
    const std::string path = temp_path("mask.pgm");
    write_mask_pgm(path, m);
    Tensor img = read_image(path);
    CHECK(img.at(0, 0, 0) == 0.0f);
    CHECK(img.at(0, 0, 1) == 255.0f);
    CHECK(m.count_on() == 1);
}

TEST_CASE("motion field storage") {
    MotionField f(3, 4);
    CHECK(f.vx.size() == 12);
    CHECK(f.vy.size() == 12);
    CHECK(f.valid.size() == 12);
    f.vx[f.index(2, 3)] = 1.5f;
    CHECK(f.vx.back() == 1.5f);
}

TEST_CASE("grid carries scale") {
    Grid g{28, 28, 8.0};
    CHECK(g.scale >= 1.0);
    CHECK(g.height == 28);
}

} // TEST_SUITE

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace lsm {

/// Dense rank-3 array (channels x height x width), channel-major, row-major
/// within a channel. Element type is float everywhere; holds both images
/// (1 or 3 channels, values in [0,255]) and network feature tensors.
class Tensor {
public:
    Tensor() = default;
    Tensor(int channels, int height, int width, float fill = 0.0f);

    int channels() const { return channels_; }
    int height() const { return height_; }
    int width() const { return width_; }
    std::size_t size() const { return data_.size(); }

    float at(int c, int y, int x) const { return data_[index(c, y, x)]; }
    float& at(int c, int y, int x) { return data_[index(c, y, x)]; }

    std::span<const float> data() const { return data_; }
    std::span<float> data() { return data_; }

    /// Single-channel copy of channel c. Throws on out-of-range c.
    Tensor channel(int c) const;

    bool same_shape(const Tensor& other) const {
        return channels_ == other.channels_ && height_ == other.height_ &&
               width_ == other.width_;
    }

    bool all_finite() const;

private:
    std::size_t index(int c, int y, int x) const {
        return (static_cast<std::size_t>(c) * height_ + y) * width_ + x;
    }

    int channels_ = 0;
    int height_ = 0;
    int width_ = 0;
    std::vector<float> data_;
};

/// Per-position 2-D displacement vectors with a validity mask. Vectors are in
/// pixels of the grid they live on and point from source to destination
/// (content at (x,y) came from (x - vx, y - vy)).
struct MotionField {
    int height = 0;
    int width = 0;
    std::vector<float> vx;
    std::vector<float> vy;
    std::vector<std::uint8_t> valid;

    MotionField() = default;
    MotionField(int h, int w)
        : height(h), width(w),
          vx(static_cast<std::size_t>(h) * w, 0.0f),
          vy(static_cast<std::size_t>(h) * w, 0.0f),
          valid(static_cast<std::size_t>(h) * w, 1) {}

    std::size_t index(int y, int x) const {
        return static_cast<std::size_t>(y) * width + x;
    }
};

/// Per-position boolean mask on a spatial grid, shared across channels.
struct Mask {
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> on;

    Mask() = default;
    Mask(int h, int w, bool fill = true)
        : height(h), width(w),
          on(static_cast<std::size_t>(h) * w, fill ? 1 : 0) {}

    bool at(int y, int x) const {
        return on[static_cast<std::size_t>(y) * width + x] != 0;
    }
    void set(int y, int x, bool v) {
        on[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0;
    }
    std::size_t count_on() const;
};

/// Spatial grid of a tensor together with its cumulative downscale factor
/// relative to the network input (1 for the input image itself).
struct Grid {
    int height = 0;
    int width = 0;
    double scale = 1.0;
};

} // namespace lsm

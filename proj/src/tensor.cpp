#include "lsm/tensor.hpp"

#include <cmath>
#include <stdexcept>

namespace lsm {

Tensor::Tensor(int channels, int height, int width, float fill)
    : channels_(channels), height_(height), width_(width) {
    if (channels < 1 || height < 1 || width < 1) {
        throw std::invalid_argument("Tensor: dimensions must be >= 1");
    }
    data_.assign(static_cast<std::size_t>(channels) * height * width, fill);
}

Tensor Tensor::channel(int c) const {
    if (c < 0 || c >= channels_) {
        throw std::invalid_argument("Tensor::channel: index out of range");
    }
    Tensor out(1, height_, width_);
    const std::size_t plane = static_cast<std::size_t>(height_) * width_;
    std::copy(data_.begin() + c * plane, data_.begin() + (c + 1) * plane,
              out.data_.begin());
    return out;
}

bool Tensor::all_finite() const {
    for (float v : data_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

std::size_t Mask::count_on() const {
    std::size_t n = 0;
    for (std::uint8_t v : on) n += v != 0;
    return n;
}

} // namespace lsm

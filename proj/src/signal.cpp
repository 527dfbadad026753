#include "lsm/signal.hpp"

#include <cmath>
#include <stdexcept>

namespace lsm {

namespace {
constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
}

std::function<double(double)> smooth_profile(int length) {
    const double w = kTwoPi / length;
    return [w](double u) {
        return std::sin(w * u) + 0.5 * std::sin(2.0 * w * u + 1.3) +
               0.25 * std::sin(3.0 * w * u + 2.1);
    };
}

Signal1Dt translating_signal_1d(int length, int frames, double velocity) {
    return translating_signal_1d(length, frames, velocity, smooth_profile(length));
}

Signal1Dt translating_signal_1d(int length, int frames, double velocity,
                                const std::function<double(double)>& profile) {
    if (length < 8 || frames < 3) {
        throw std::invalid_argument("translating_signal_1d: need length >= 8, frames >= 3");
    }
    Signal1Dt sig(length, frames);
    for (int t = 0; t < frames; ++t) {
        for (int x = 0; x < length; ++x) {
            // Wrap into [0, length) so equal phases give bit-equal samples.
            double u = std::fmod(x - velocity * t, static_cast<double>(length));
            if (u < 0.0) u += length;
            sig.at(x, t) = profile(u);
        }
    }
    return sig;
}

} // namespace lsm

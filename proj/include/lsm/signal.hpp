#pragma once

#include <functional>
#include <vector>

namespace lsm {

/// I(x, t) sampled on an X x T grid, spatial step 1 px, temporal step 1
/// frame, periodic in x. Stored in double: these signals feed the
/// finite-difference checks, where float truncation would drown the
/// quantities being measured.
struct Signal1Dt {
    int x_size = 0;
    int t_size = 0;
    std::vector<double> values;

    Signal1Dt() = default;
    Signal1Dt(int x, int t) : x_size(x), t_size(t), values(static_cast<std::size_t>(x) * t, 0.0) {}

    double at(int x, int t) const { return values[static_cast<std::size_t>(t) * x_size + x]; }
    double& at(int x, int t) { return values[static_cast<std::size_t>(t) * x_size + x]; }

    /// Periodic in x.
    double at_wrapped(int x, int t) const {
        int xm = x % x_size;
        if (xm < 0) xm += x_size;
        return at(xm, t);
    }
};

/// The fixed smooth profile used throughout the 1-D checks: a small sum of
/// sinusoids with period `length`.
std::function<double(double)> smooth_profile(int length);

/// I(x, t) = profile(x - v*t), periodic in x. Frames of an exactly
/// translating signal; with the default profile the construction satisfies
/// the transport equation by definition.
Signal1Dt translating_signal_1d(int length, int frames, double velocity);
Signal1Dt translating_signal_1d(int length, int frames, double velocity,
                                const std::function<double(double)>& profile);

} // namespace lsm

#pragma once

#include "lsm/signal.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace lsm {

/// One measured quantity with the bound it must stay under.
struct CheckItem {
    std::string label;
    double value = 0.0;
    double bound = 0.0;
    bool ok() const { return value <= bound; }
};

struct CheckReport {
    std::string name;
    std::vector<CheckItem> items;
    std::string note;
    bool passed() const {
        for (const CheckItem& it : items) {
            if (!it.ok()) return false;
        }
        return true;
    }
};

/// Discrete transport residual Dx(I)*v + Dt(I) with central differences,
/// periodic in x. Row t of the result corresponds to signal frame t+1 (the
/// first and last frames have no centered temporal difference).
Signal1Dt flow_residual(const Signal1Dt& sig, double v);

double max_abs(const Signal1Dt& a);
double rms(const Signal1Dt& a);
/// max |Dt| over the temporal interior; the reference magnitude all
/// relative tolerances are expressed against.
double max_abs_dt(const Signal1Dt& sig);

// Signal-domain versions of the network operations, periodic in x.
Signal1Dt conv_x(const Signal1Dt& sig, const std::vector<double>& taps);
enum class Nonlinearity { relu, sigmoid };
Signal1Dt apply_nonlinearity(const Signal1Dt& sig, Nonlinearity kind);
Signal1Dt sliding_max(const Signal1Dt& sig, int half_width);
/// I'(x, t) = I(factor*x, t); factor must divide the length so periodicity
/// survives. factor 1 is the identity.
Signal1Dt downsample_x(const Signal1Dt& sig, int factor);

/// Residual RMS per candidate velocity and the index of the minimizer
/// (earliest on exact ties).
struct VelocityScan {
    std::vector<double> candidates;
    std::vector<double> residual_rms;
    int best = 0;
    double best_velocity() const { return candidates[best]; }
};
VelocityScan scan_velocities(const Signal1Dt& sig, const std::vector<double>& candidates);

// Per-operation preservation checks. Each verifies that the pre-operation
// velocity still (approximately) solves the transport equation afterwards,
// with bounds relative to the signal's own derivative magnitudes.
CheckReport check_conv_preservation(const Signal1Dt& sig, const std::vector<double>& taps,
                                    double v, bool expect_small_residual = true);
CheckReport check_nonlin_preservation(const Signal1Dt& sig, Nonlinearity kind, double v);
CheckReport check_localmax_preservation(const Signal1Dt& sig, int half_width, double v);
CheckReport check_scale_change(const Signal1Dt& sig, int factor, double v,
                               std::vector<double> candidates = {});

/// conv -> relu -> local max -> downsample(2) on a translating signal: the
/// residual-minimizing velocity of the composite must be v/2.
CheckReport check_composite_chain(const Signal1Dt& sig, double v);

/// The fixed suite behind the verify-flow command: every operation class on
/// the standard translating profile, plus the composite chain.
std::vector<CheckReport> run_standard_suite();

/// Writes a pass/fail table, one line per item. Returns true if all passed.
bool print_reports(std::ostream& out, const std::vector<CheckReport>& reports);

} // namespace lsm

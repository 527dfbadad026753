#pragma once

#include "lsm/affine.hpp"
#include "lsm/block_match.hpp"
#include "lsm/metrics.hpp"
#include "lsm/nn.hpp"
#include "lsm/rng.hpp"
#include "lsm/tensor.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>

namespace lsm {

enum class TransformKind { translate_x, translate_y, rotate, scale, shear_x, shear_y };

const char* transform_kind_name(TransformKind kind);
TransformKind parse_transform_kind(const std::string& name);

/// AffineParams with the single swept parameter set to `value`
/// (scale sets sx and sy together).
AffineParams transform_params(TransformKind kind, double value);

/// One-parameter sweep: NRMSE of the latent prediction at each value from
/// start to stop inclusive.
struct SweepSpec {
    TransformKind kind = TransformKind::translate_x;
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;
};

/// Randomized affine protocol: each sample draws the seven parameters
/// independently and uniformly within the bounds.
struct HistogramSpec {
    int count = 100;
    std::uint64_t seed = 1;
    double tx_bound = 32.0;  // +- px
    double ty_bound = 32.0;  // +- px
    double scale_min = 0.95;
    double scale_max = 1.05;
    double shear_bound = 5.0; // +- degrees
    double rot_bound = 10.0;  // +- degrees
    int bins = 50;
};

/// Network, weights, input image, tapped layer and metric masking shared by
/// the prediction experiments.
struct PredictSetup {
    NetworkSpec net;
    WeightStore weights;
    Tensor image;
    int layer = -1;  // -1 = final layer
    int border = -1; // metric border cells; -1 = derive from receptive field, 0 = none
};

/// Effective metric border for the setup (resolves border == -1).
int metric_border(const PredictSetup& setup);

/// Full protocol for one transform: warp, forward both frames, predict,
/// NRMSE over valid positions minus the metric border.
MetricsReport evaluate_transform(const PredictSetup& setup, const AffineParams& params);

/// Smooth seeded octave noise in [0, 255]; the default experiment input, so
/// the repo carries no image assets.
Tensor synth_texture(int channels, int height, int width, std::uint64_t seed);

/// Mean over channels; single-channel images pass through.
Tensor to_gray(const Tensor& img);

// CSV writers. Output is deterministic byte-for-byte for fixed specs/seeds.
void run_sweep(const PredictSetup& setup, const SweepSpec& spec, std::ostream& csv);
void run_histogram(const PredictSetup& setup, const HistogramSpec& spec,
                   std::ostream& samples_csv, std::ostream& bins_csv);
/// Input-space field (b=31, r=11) on the grayscale images and per-channel
/// latent fields (b=3, r=5) on the tapped tensors.
void run_fieldviz(const PredictSetup& setup, const Tensor& target_image,
                  std::ostream& input_csv, std::ostream& latent_csv);

AffineParams sample_affine(const HistogramSpec& spec, SplitMix64& rng);

} // namespace lsm

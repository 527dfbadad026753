#pragma once

#include "lsm/tensor.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace lsm {

enum class LayerKind { conv, relu, sigmoid, maxpool, downsample };

/// One layer of a forward-only network. Only the fields of the active kind
/// are meaningful. Padding is always zero-padding with the explicit count.
struct LayerSpec {
    LayerKind kind = LayerKind::relu;

    // conv
    int out_channels = 0;
    int kernel_h = 0;
    int kernel_w = 0;
    int stride = 1;
    int pad = 0;

    // maxpool (stride field shared with conv)
    int window = 0;

    // downsample
    int factor = 0;

    static LayerSpec conv(int out_channels, int k, int stride = 1, int pad = 0);
    static LayerSpec relu();
    static LayerSpec sigmoid();
    static LayerSpec maxpool(int window, int stride);
    static LayerSpec downsample(int factor);

    /// Spatial stride contributed by this layer (1 for pointwise ops).
    int spatial_stride() const;
};

/// Interval of input positions a single output position depends on, along one
/// axis: output x covers input [jump*x + lo, jump*x + hi].
struct ReceptiveField {
    long long jump = 1;
    long long lo = 0;
    long long hi = 0;

    /// Range [first, last] of output positions whose receptive field stays
    /// inside an input of the given extent (i.e. never touches padding).
    std::pair<long long, long long> clean_range(long long input_extent) const;
};

struct NetworkSpec {
    std::vector<LayerSpec> layers;
    int in_channels = 3;

    /// Product of all strides/factors from the input through layer index
    /// `upto` inclusive (-1 or past-the-end means the whole network). This is
    /// the factor by which the spatial grid, and with it any motion, shrinks.
    int cumulative_scale(int upto = -1) const;

    /// Channel count of the tensor produced by layer `upto` (input channels
    /// when upto < 0).
    int channels_at(int upto) const;

    ReceptiveField receptive_field_x(int upto = -1) const;
    ReceptiveField receptive_field_y(int upto = -1) const;

    /// Spatial grid of the tensor produced by layer `upto` for a given input
    /// size, with its cumulative scale.
    Grid grid_at(int input_height, int input_width, int upto = -1) const;
};

/// Weights of one conv layer: out_ch x in_ch x kh x kw, plus per-output bias.
struct ConvWeights {
    int out_channels = 0;
    int in_channels = 0;
    int kernel_h = 0;
    int kernel_w = 0;
    std::vector<float> weights;
    std::vector<float> bias;

    std::size_t weight_index(int oc, int ic, int ky, int kx) const {
        return ((static_cast<std::size_t>(oc) * in_channels + ic) * kernel_h + ky) * kernel_w + kx;
    }
};

struct WeightStore {
    std::vector<ConvWeights> convs;
};

// Layer primitives. All are pure and deterministic with a fixed per-element
// summation order; accumulation happens in double.
Tensor conv2d(const Tensor& input, const ConvWeights& w, int stride, int pad);
Tensor relu(const Tensor& input);
Tensor sigmoid(const Tensor& input);
Tensor maxpool(const Tensor& input, int window, int stride);
Tensor downsample(const Tensor& input, int factor);

/// Runs the network; result[0] is the input, result[i] the output of layer
/// i-1. Throws if the weight store does not bind to the conv layers.
std::vector<Tensor> forward(const NetworkSpec& net, const WeightStore& weights,
                            const Tensor& input);

/// Fixed preprocessing for 8-bit images: maps [0, 255] to [-1, 1]. Keeps
/// channels of randomly initialized networks centered instead of letting the
/// image DC rail them through the ReLUs.
Tensor normalize_image(const Tensor& img);

/// Deterministic weights: one SplitMix64 stream seeded with `seed`, consumed
/// per conv layer in network order, weights in layout order, each drawn
/// uniform(-1,1) and scaled by 1/sqrt(in_ch*kh*kw); biases zero.
WeightStore seeded_weights(const NetworkSpec& net, std::uint64_t seed);

// Network spec file: one layer per line, e.g.
//   conv out=16 k=3 stride=1 pad=1
//   relu
//   maxpool n=2 stride=2
//   downsample s=2
// Blank lines and lines starting with '#' are ignored.
NetworkSpec parse_network(std::istream& in);
NetworkSpec load_network(const std::string& path);

// WeightStore file "LFW1": magic, then per conv layer four u32 LE dims
// (out, in, kh, kw), f32 LE weights in layout order, u32 LE bias length and
// f32 LE biases. Layers run to EOF.
void write_lfw1(const std::string& path, const WeightStore& w);
WeightStore read_lfw1(const std::string& path);

/// The repo's reference network: three 3x3 conv/relu stages with two 2x2
/// max-pools and a final stride-2 conv; cumulative scale 8. Mirrors a
/// 224->28 backbone downscale at toy size.
NetworkSpec make_toy_net(int in_channels = 3);

} // namespace lsm

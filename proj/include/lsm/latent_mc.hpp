#pragma once

#include "lsm/affine.hpp"
#include "lsm/nn.hpp"
#include "lsm/tensor.hpp"

namespace lsm {

/// A feature tensor predicted by motion-compensating a reference tensor,
/// together with the positions where prediction was possible.
struct LatentPrediction {
    Tensor predicted;
    Mask valid;
    double scale = 1.0; // input-to-latent grid factor used
};

/// Maps a dense input-grid motion field onto the latent grid: latent
/// position (i, j) takes the vector at the center-aligned input position
/// ((i + 0.5)*scale - 0.5, rounded) divided by scale. Latent dims are
/// floor(input dims / scale); validity is inherited.
MotionField scale_motion(const MotionField& input_field, double scale);

/// Warps every channel of `reference` with the scaled motion field (inverse
/// mapping, bilinear). Positions whose scaled source falls outside the
/// latent grid, or whose input-grid sample was invalid, are masked out and
/// zero-filled.
LatentPrediction predict_tensor(const Tensor& reference, const MotionField& input_motion,
                                double scale);

struct EndToEndResult {
    LatentPrediction prediction;
    Tensor actual;            // tensor the network produced from the warped image
    MotionField input_motion; // ground-truth input-space motion of the warp
    Grid latent_grid;
};

/// The full protocol for one transform: warp the image, run the network on
/// both frames, predict the transformed tensor from the reference tensor at
/// the tapped layer (default: final), and return both for metric
/// computation.
EndToEndResult end_to_end_predict(const NetworkSpec& net, const WeightStore& weights,
                                  const Tensor& reference_image, const AffineParams& params,
                                  int layer = -1);

/// Shrinks `base` to positions at least `border` cells from every grid edge
/// whose warp source position is also that far inside; used to drop cells
/// whose value depends on zero padding.
Mask interior_mask(const Mask& base, const MotionField& latent_field, int border);

/// Border width, in cells of the tapped layer's grid, inside which values
/// depend on padding rather than image content.
int padding_border_cells(const NetworkSpec& net, int height, int width, int layer = -1);

} // namespace lsm

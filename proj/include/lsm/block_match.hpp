#pragma once

#include "lsm/tensor.hpp"

#include <iosfwd>
#include <vector>

namespace lsm {

/// Exhaustive search over integer displacements within +-range, matching a
/// block x block window around each pixel by SSD. Step is fixed at 1 px.
struct BlockMatchConfig {
    int block = 3; // odd
    int range = 5;

    /// b=31, r=11: the configuration used on full-resolution input frames.
    static BlockMatchConfig input_preset() { return {31, 11}; }
    /// b=3, r=5: the configuration used on feature-tensor channels.
    static BlockMatchConfig latent_preset() { return {3, 5}; }
};

/// Motion of `target` relative to `reference`, one vector per target pixel:
/// the vector v means the content at a pixel came from pixel - v in the
/// reference. SSD is normalized by the in-bounds overlap count so blocks
/// clipped at the border compete fairly; ties prefer the smallest |d|^2,
/// then the smallest dy, then dx, of the searched displacement.
MotionField estimate_motion(const Tensor& reference, const Tensor& target,
                            const BlockMatchConfig& cfg);

/// estimate_motion applied to each channel independently.
std::vector<MotionField> estimate_motion_multichannel(const Tensor& reference,
                                                      const Tensor& target,
                                                      const BlockMatchConfig& cfg);

/// CSV with header x,y,vx,vy,valid, one row per position, row-major.
void write_motion_csv(std::ostream& out, const MotionField& field);

} // namespace lsm

#pragma once

#include "lsm/tensor.hpp"

#include <iosfwd>
#include <string>

namespace lsm {

// Tensor file format "LFT1": 4-byte magic, three u32 little-endian dims
// (channels, height, width), then c*h*w f32 little-endian values in layout
// order. Round-trips bit-exactly.
void write_lft1(std::ostream& out, const Tensor& t);
void write_lft1(const std::string& path, const Tensor& t);
Tensor read_lft1(std::istream& in);
Tensor read_lft1(const std::string& path);

// Binary PGM (P5) and PPM (P6), 8-bit, maxval 255. Pixel bytes map to float
// values in [0,255]; writing clamps and rounds to nearest. A 1-channel tensor
// is written as PGM, a 3-channel one as PPM.
Tensor read_image(const std::string& path);
void write_image(const std::string& path, const Tensor& img);

// 0 -> black, nonzero -> white; for exporting validity masks.
void write_mask_pgm(const std::string& path, const Mask& mask);

} // namespace lsm

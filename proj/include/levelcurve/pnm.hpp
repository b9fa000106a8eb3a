#pragma once

#include <string>

#include "levelcurve/field.hpp"

namespace levelcurve {

/// Reads a binary netpbm image: P5 (one channel) or P6 (three channels),
/// maxval 255. Throws UnsupportedFormat, CorruptHeader, TruncatedData,
/// IoError.
VectorImage read_image(const std::string& path);

/// P5, values rounded and clamped to [0, 255].
void write_pgm(const std::string& path, const ScalarField& field);

/// P6 from a 3-channel image.
void write_ppm(const std::string& path, const VectorImage& image);

/// P5 with foreground 255, background 0.
void write_mask(const std::string& path, const Mask& mask);

/// Any single-channel image reinterpreted as a mask: nonzero = selected.
Mask read_mask(const std::string& path);

} // namespace levelcurve

#pragma once

#include <string>

#include "wavetwin/map.hpp"

namespace wavetwin {

/// Load a PNG or PGM (P2/P5) image as 1 (gray) or 3 (RGB) channels scaled
/// to [0, 1]. Alpha is dropped; gray+alpha becomes gray.
MultiChannelMap read_image(const std::string& path);
MultiChannelMap read_png(const std::string& path);
MultiChannelMap read_pgm(const std::string& path);

/// 8-bit grayscale PNG of x mapped linearly from [lo, hi] to [0, 255].
void write_png(const std::string& path, const FeatureMap& x, double lo, double hi);

/// Symmetric scaling about zero by the max magnitude (zero maps to 128).
void write_png_signed(const std::string& path, const FeatureMap& x);

/// Scaling from [0, max] to [0, 255].
void write_png_unsigned(const std::string& path, const FeatureMap& x);

/// Binary PGM (P5), 8-bit, values clamped to [0, 1].
void write_pgm(const std::string& path, const FeatureMap& x);

/// Row-major CSV with full double precision (%.17g).
void write_csv(const std::string& path, const FeatureMap& x);
std::string format_csv(const FeatureMap& x);

}  // namespace wavetwin

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "wavetwin/map.hpp"

namespace wavetwin {

/// a cos(wx x + wy y + phase), with x along columns and y along rows.
struct Sinusoid {
    double wy = 0.0;
    double wx = 0.0;
    double amplitude = 1.0;
    double phase = 0.0;
};

/// Evaluate a sum of sinusoids on a rows x cols grid translated by
/// (shift_y, shift_x): sample (r, c) reads the continuous signal at
/// (r + shift_y, c + shift_x). Fractional shifts are exact.
FeatureMap render(const std::vector<Sinusoid>& terms, int rows, int cols, double shift_y = 0.0,
                  double shift_x = 0.0);

/// `count` sinusoids with frequencies drawn uniformly inside the box
/// [lo, hi] (per axis, angular frequencies), snapped to the DFT grid of
/// `period` samples so the sum is exactly periodic over `period`
/// (period <= 0 disables snapping). Unit total power.
std::vector<Sinusoid> bandlimited_probe(std::array<double, 2> lo_yx, std::array<double, 2> hi_yx, int count,
                                        std::uint64_t seed, int period = 0);

/// Random image with a 1/|omega|^exponent amplitude spectrum (natural-image
/// statistics), mean 0.5 and standard deviation 0.2.
FeatureMap natural_like_image(int size, std::uint64_t seed, double exponent = 1.0);

}  // namespace wavetwin

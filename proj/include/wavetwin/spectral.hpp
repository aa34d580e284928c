#pragma once

#include "wavetwin/map.hpp"

namespace wavetwin {

/// |DFT|^2 of a kernel zero-padded to gridsize x gridsize, DC moved to
/// (gridsize/2, gridsize/2). Columns run along xi_1 (x), rows along xi_2 (y).
FeatureMap kernel_spectrum(const FeatureMap& k, int gridsize);
FeatureMap kernel_spectrum(const ComplexMap& k, int gridsize);

/// Analytic extension v + i H(v), with H multiplying the spectrum by
/// -i sign(xi_1) and sign(0) = 0. Computed on a zero-padded grid of at least
/// `min_grid` (rounded up to cover 4x the kernel); the result covers the whole
/// padded grid and keeps v's lattice coordinates through its origin.
ComplexMap hilbert2d(const FeatureMap& v, int min_grid = 0);

/// Fraction of spectral energy with xi_1 >= 0 (the +-pi column counts half).
double positive_xi1_fraction(const ComplexMap& k, int gridsize = 256);
double positive_xi1_fraction(const FeatureMap& k, int gridsize = 256);

}  // namespace wavetwin

#pragma once

#include "wavetwin/map.hpp"

namespace wavetwin::fft {

/// Unnormalized 2D DFT: X[k] = sum_n x[n] exp(-2 pi i k.n / N).
/// Storage index is used as n; the map origin is ignored.
ComplexMap forward(const ComplexMap& x);

/// Inverse 2D DFT including the 1/(rows*cols) factor.
ComplexMap inverse(const ComplexMap& X);

/// Move the zero-frequency bin to (rows/2, cols/2).
template <typename T>
Map2D<T> shift_center(const Map2D<T>& x) {
    Map2D<T> out(x.rows(), x.cols());
    const int hr = x.rows() / 2;
    const int hc = x.cols() / 2;
    for (int r = 0; r < x.rows(); ++r)
        for (int c = 0; c < x.cols(); ++c)
            out((r + hr) % x.rows(), (c + hc) % x.cols()) = x(r, c);
    return out;
}

/// Angular frequency of DFT bin k on an n-point grid, wrapped to [-pi, pi).
double bin_frequency(int k, int n);

}  // namespace wavetwin::fft

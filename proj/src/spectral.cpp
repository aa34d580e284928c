#include "wavetwin/spectral.hpp"

#include <stdexcept>
#include <string>

#include "wavetwin/fft.hpp"

namespace wavetwin {
namespace {

ComplexMap padded_spectrum(const ComplexMap& k, int gridsize) {
    if (k.empty()) throw std::invalid_argument("kernel_spectrum: empty kernel");
    if (gridsize < k.rows() || gridsize < k.cols())
        throw std::invalid_argument("kernel_spectrum: gridsize " + std::to_string(gridsize) +
                                    " smaller than kernel " + std::to_string(k.rows()) + "x" +
                                    std::to_string(k.cols()));
    ComplexMap padded(gridsize, gridsize);
    for (int r = 0; r < k.rows(); ++r)
        for (int c = 0; c < k.cols(); ++c) padded(r, c) = k(r, c);
    return fft::forward(padded);
}

int next_pow2(int n) {
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace

FeatureMap kernel_spectrum(const ComplexMap& k, int gridsize) {
    const ComplexMap spec = padded_spectrum(k, gridsize);
    FeatureMap power(gridsize, gridsize);
    for (std::size_t i = 0; i < spec.size(); ++i) power.data()[i] = std::norm(spec.data()[i]);
    return fft::shift_center(power);
}

FeatureMap kernel_spectrum(const FeatureMap& k, int gridsize) {
    return kernel_spectrum(to_complex(k), gridsize);
}

ComplexMap hilbert2d(const FeatureMap& v, int min_grid) {
    if (v.empty()) throw std::invalid_argument("hilbert2d: empty input");
    const int grid = next_pow2(std::max({min_grid, 4 * v.rows(), 4 * v.cols()}));
    const int off_r = (grid - v.rows()) / 2;
    const int off_c = (grid - v.cols()) / 2;
    ComplexMap padded(grid, grid);
    for (int r = 0; r < v.rows(); ++r)
        for (int c = 0; c < v.cols(); ++c) padded(r + off_r, c + off_c) = v(r, c);
    ComplexMap spec = fft::forward(padded);
    for (int r = 0; r < grid; ++r)
        for (int c = 0; c < grid; ++c) {
            // 1 + sign(xi_1); the zero and +-pi columns have sign 0
            double gain = 1.0;
            if (c != 0 && 2 * c != grid) gain = 2 * c < grid ? 2.0 : 0.0;
            spec(r, c) *= gain;
        }
    ComplexMap out = fft::inverse(spec);
    out.set_origin({v.origin().row + off_r, v.origin().col + off_c});
    return out;
}

double positive_xi1_fraction(const ComplexMap& k, int gridsize) {
    const ComplexMap spec = padded_spectrum(k, gridsize);
    double pos = 0.0, total = 0.0;
    for (int r = 0; r < gridsize; ++r)
        for (int c = 0; c < gridsize; ++c) {
            const double e = std::norm(spec(r, c));
            total += e;
            if (2 * c == gridsize) pos += 0.5 * e;
            else if (2 * c < gridsize) pos += e;
        }
    return total > 0.0 ? pos / total : 0.0;
}

double positive_xi1_fraction(const FeatureMap& k, int gridsize) {
    return positive_xi1_fraction(to_complex(k), gridsize);
}

}  // namespace wavetwin

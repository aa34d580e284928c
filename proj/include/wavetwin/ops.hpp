#pragma once

#include <string_view>
#include <vector>

#include "wavetwin/map.hpp"

namespace wavetwin {

/// How samples outside a map are read.
///   Zero      - zero padding
///   Symmetric - half-sample mirror: x[-1] = x[0], x[n] = x[n-1]
///   Periodic  - wrap around
enum class Boundary { Zero, Symmetric, Periodic };

enum class ConvMethod { Auto, Direct, Fourier };

Boundary parse_boundary(std::string_view s);
const char* to_string(Boundary b);

struct CorrelateOptions {
    Boundary boundary = Boundary::Symmetric;
    int stride = 1;
    ConvMethod method = ConvMethod::Auto;
};

/// Cross-correlation (x * v)[n] = sum_k x[n + k] v[k] with k on the kernel's
/// lattice (see Map2D::origin), evaluated at n = stride * i for every
/// n inside x. The output therefore has ceil(rows/stride) x ceil(cols/stride)
/// samples.
FeatureMap cross_correlate(const FeatureMap& x, const FeatureMap& v, const CorrelateOptions& opt = {});
ComplexMap cross_correlate(const FeatureMap& x, const ComplexMap& v, const CorrelateOptions& opt = {});

/// Cross-correlation with a fixed kernel on rows x cols inputs under the
/// periodic boundary. The kernel is folded onto the grid and transformed
/// once; each call costs one forward and one (subsampled) inverse DFT.
class PeriodicCorrelator {
public:
    PeriodicCorrelator(const ComplexMap& v, int rows, int cols);
    PeriodicCorrelator(const FeatureMap& v, int rows, int cols);

    [[nodiscard]] ComplexMap apply(const FeatureMap& x, int stride = 1) const;
    [[nodiscard]] int rows() const { return rows_; }
    [[nodiscard]] int cols() const { return cols_; }

private:
    int rows_ = 0;
    int cols_ = 0;
    ComplexMap spectrum_;
};

/// (x downarrow m)[n] = x[m n], keeping every n with m n inside x.
template <typename T>
Map2D<T> subsample(const Map2D<T>& x, int m) {
    if (m <= 0) throw std::invalid_argument("subsample: factor must be >= 1");
    const int rows = (x.rows() + m - 1) / m;
    const int cols = (x.cols() + m - 1) / m;
    Map2D<T> out(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) out(r, c) = x(m * r, m * c);
    return out;
}

/// V[l][k]: kernel from input channel k to output channel l.
using KernelTensor = std::vector<std::vector<FeatureMap>>;
using ComplexKernelTensor = std::vector<std::vector<ComplexMap>>;

/// Y_l = sum_k (X_k * V_lk) downarrow m.
MultiChannelMap conv_layer(const MultiChannelMap& X, const KernelTensor& V, int m,
                           Boundary boundary = Boundary::Symmetric);
MultiChannelComplex conv_layer(const MultiChannelMap& X, const ComplexKernelTensor& V, int m,
                               Boundary boundary = Boundary::Symmetric);

FeatureMap relu(const FeatureMap& y);
FeatureMap bias_relu(const FeatureMap& y, double b);

/// 3x3 max over {2n + k : |k|_inf <= 1}, one output per even site of y.
/// Taps falling outside y are skipped, except with Periodic where they wrap.
FeatureMap max_pool(const FeatureMap& y, Boundary boundary = Boundary::Symmetric);

FeatureMap modulus(const ComplexMap& z);

/// Max pooling applied to every channel of conv_layer(X, V, m).
MultiChannelMap rmax(const MultiChannelMap& X, const KernelTensor& V, int m,
                     Boundary boundary = Boundary::Symmetric);

/// Modulus of the complex convolution layer at stride 2m.
MultiChannelMap cmod(const MultiChannelMap& X, const ComplexKernelTensor& W, int m,
                     Boundary boundary = Boundary::Symmetric);

/// Normalized binomial row of the given length (Pascal row / 2^(size-1)).
std::vector<double> binomial_row(int size);

/// Binomial low-pass (size x size, centred at (size-1)/2) followed by downarrow 2.
FeatureMap blur_pool(const FeatureMap& y, int size, Boundary boundary = Boundary::Symmetric);

/// Read x at an arbitrary integer position under a boundary rule.
double sample_extended(const FeatureMap& x, int r, int c, Boundary boundary);

}  // namespace wavetwin

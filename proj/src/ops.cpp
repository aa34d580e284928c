#include "wavetwin/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wavetwin/fft.hpp"

namespace wavetwin {
namespace {

int extend_index(int i, int n, Boundary b) {
    if (i >= 0 && i < n) return i;
    switch (b) {
        case Boundary::Zero:
            return -1;
        case Boundary::Periodic: {
            const int r = i % n;
            return r < 0 ? r + n : r;
        }
        case Boundary::Symmetric: {
            const int period = 2 * n;
            int r = i % period;
            if (r < 0) r += period;
            return r < n ? r : period - 1 - r;
        }
    }
    return -1;
}

// Padded copy E with E(i, j) = x_ext(i - top, j - left), for i < rows, j < cols.
FeatureMap extended_copy(const FeatureMap& x, int top, int left, int rows, int cols, Boundary b) {
    FeatureMap e(rows, cols);
    std::vector<int> ci(static_cast<std::size_t>(cols));
    for (int j = 0; j < cols; ++j) ci[j] = extend_index(j - left, x.cols(), b);
    for (int i = 0; i < rows; ++i) {
        const int r = extend_index(i - top, x.rows(), b);
        if (r < 0) continue;
        for (int j = 0; j < cols; ++j)
            if (ci[j] >= 0) e(i, j) = x(r, ci[j]);
    }
    return e;
}

// Smallest n' >= n whose only prime factors are 2, 3, 5.
int smooth_size(int n) {
    for (int m = std::max(n, 1);; ++m) {
        int k = m;
        for (int p : {2, 3, 5})
            while (k % p == 0) k /= p;
        if (k == 1) return m;
    }
}

template <typename K>
void check_kernel(const Map2D<K>& v, const CorrelateOptions& opt) {
    if (v.empty()) throw std::invalid_argument("cross_correlate: empty kernel");
    if (opt.stride < 1) throw std::invalid_argument("cross_correlate: stride must be >= 1");
}

template <typename K>
Map2D<K> correlate_direct(const FeatureMap& x, const Map2D<K>& v, const CorrelateOptions& opt) {
    const int s = opt.stride;
    const int out_r = (x.rows() + s - 1) / s;
    const int out_c = (x.cols() + s - 1) / s;
    const Index2 o = v.origin();
    const FeatureMap e = extended_copy(x, o.row, o.col, x.rows() + v.rows() - 1,
                                       x.cols() + v.cols() - 1, opt.boundary);
    Map2D<K> out(out_r, out_c);
    for (int i = 0; i < out_r; ++i)
        for (int j = 0; j < out_c; ++j) {
            K acc{};
            const int n0 = s * i;
            const int n1 = s * j;
            for (int a = 0; a < v.rows(); ++a) {
                const double* row = &e(n0 + a, n1);
                for (int b = 0; b < v.cols(); ++b) acc += row[b] * v(a, b);
            }
            out(i, j) = acc;
        }
    return out;
}

template <typename K>
Map2D<K> correlate_fourier(const FeatureMap& x, const Map2D<K>& v, const CorrelateOptions& opt) {
    const int s = opt.stride;
    const Index2 o = v.origin();
    const int need_r = x.rows() + v.rows() - 1;
    const int need_c = x.cols() + v.cols() - 1;
    const int P = smooth_size(need_r);
    const int Q = smooth_size(need_c);

    const FeatureMap e = extended_copy(x, o.row, o.col, need_r, need_c, opt.boundary);
    ComplexMap E(P, Q);
    for (int i = 0; i < need_r; ++i)
        for (int j = 0; j < need_c; ++j) E(i, j) = e(i, j);

    // g[-s mod P] = v[s], so circular convolution E (*) g is the correlation.
    ComplexMap g(P, Q);
    for (int a = 0; a < v.rows(); ++a)
        for (int b = 0; b < v.cols(); ++b) g((P - a) % P, (Q - b) % Q) = cplx(v(a, b));

    ComplexMap Ef = fft::forward(E);
    const ComplexMap Gf = fft::forward(g);
    for (std::size_t k = 0; k < Ef.size(); ++k) Ef.data()[k] *= Gf.data()[k];
    const ComplexMap y = fft::inverse(Ef);

    const int out_r = (x.rows() + s - 1) / s;
    const int out_c = (x.cols() + s - 1) / s;
    Map2D<K> out(out_r, out_c);
    for (int i = 0; i < out_r; ++i)
        for (int j = 0; j < out_c; ++j) {
            if constexpr (std::is_same_v<K, double>)
                out(i, j) = y(s * i, s * j).real();
            else
                out(i, j) = y(s * i, s * j);
        }
    return out;
}

template <typename K>
Map2D<K> correlate(const FeatureMap& x, const Map2D<K>& v, const CorrelateOptions& opt) {
    check_kernel(v, opt);
    if (x.empty()) return {};
    if (opt.boundary == Boundary::Periodic && opt.method != ConvMethod::Direct) {
        const double outputs = std::ceil(double(x.rows()) / opt.stride) * std::ceil(double(x.cols()) / opt.stride);
        const double area = double(x.rows()) * x.cols();
        if (opt.method == ConvMethod::Fourier || outputs * double(v.size()) > 15.0 * area * std::log2(area + 2.0)) {
            const ComplexMap y = PeriodicCorrelator(v, x.rows(), x.cols()).apply(x, opt.stride);
            if constexpr (std::is_same_v<K, double>)
                return real_part(y);
            else
                return y;
        }
        return correlate_direct(x, v, opt);
    }
    ConvMethod method = opt.method;
    if (method == ConvMethod::Auto) {
        const double outputs = std::ceil(double(x.rows()) / opt.stride) * std::ceil(double(x.cols()) / opt.stride);
        const double direct = outputs * double(v.size());
        const double area = double(smooth_size(x.rows() + v.rows() - 1)) * smooth_size(x.cols() + v.cols() - 1);
        const double fourier = 15.0 * area * std::log2(area + 2.0);
        method = direct <= fourier ? ConvMethod::Direct : ConvMethod::Fourier;
    }
    return method == ConvMethod::Direct ? correlate_direct(x, v, opt) : correlate_fourier(x, v, opt);
}

template <typename K>
Map2D<K>& accumulate(Map2D<K>& acc, const Map2D<K>& term) {
    if (acc.empty()) {
        acc = term;
        return acc;
    }
    for (std::size_t i = 0; i < acc.size(); ++i) acc.data()[i] += term.data()[i];
    return acc;
}

template <typename K>
MultiChannel<K> conv_layer_impl(const MultiChannelMap& X, const std::vector<std::vector<Map2D<K>>>& V,
                                int m, Boundary boundary) {
    if (m < 1) throw std::invalid_argument("conv_layer: stride must be >= 1");
    MultiChannel<K> out;
    for (std::size_t l = 0; l < V.size(); ++l) {
        if (static_cast<int>(V[l].size()) != X.channels())
            throw std::invalid_argument("conv_layer: output channel " + std::to_string(l) + " has " +
                                        std::to_string(V[l].size()) + " kernels for " +
                                        std::to_string(X.channels()) + " input channels");
        Map2D<K> acc;
        for (int k = 0; k < X.channels(); ++k)
            accumulate(acc, correlate(X[k], V[l][static_cast<std::size_t>(k)], {boundary, m, ConvMethod::Auto}));
        out.push_back(std::move(acc));
    }
    return out;
}

template <typename K>
ComplexMap folded_spectrum(const Map2D<K>& v, int rows, int cols) {
    if (v.empty()) throw std::invalid_argument("PeriodicCorrelator: empty kernel");
    if (rows < 1 || cols < 1) throw std::invalid_argument("PeriodicCorrelator: empty grid");
    // g[-k mod N] += v[k]: circular convolution with g is correlation with v.
    ComplexMap g(rows, cols);
    const Index2 o = v.origin();
    for (int a = 0; a < v.rows(); ++a)
        for (int b = 0; b < v.cols(); ++b) {
            const int r = extend_index(-(a - o.row), rows, Boundary::Periodic);
            const int c = extend_index(-(b - o.col), cols, Boundary::Periodic);
            g(r, c) += cplx(v(a, b));
        }
    return fft::forward(g);
}

}  // namespace

PeriodicCorrelator::PeriodicCorrelator(const ComplexMap& v, int rows, int cols)
    : rows_(rows), cols_(cols), spectrum_(folded_spectrum(v, rows, cols)) {}

PeriodicCorrelator::PeriodicCorrelator(const FeatureMap& v, int rows, int cols)
    : rows_(rows), cols_(cols), spectrum_(folded_spectrum(v, rows, cols)) {}

ComplexMap PeriodicCorrelator::apply(const FeatureMap& x, int stride) const {
    if (x.rows() != rows_ || x.cols() != cols_)
        throw std::invalid_argument("PeriodicCorrelator: input is " + std::to_string(x.rows()) + "x" +
                                    std::to_string(x.cols()) + ", expected " + std::to_string(rows_) + "x" +
                                    std::to_string(cols_));
    if (stride < 1) throw std::invalid_argument("PeriodicCorrelator: stride must be >= 1");
    ComplexMap X = fft::forward(to_complex(x));
    for (std::size_t i = 0; i < X.size(); ++i) X.data()[i] *= spectrum_.data()[i];
    if (rows_ % stride != 0 || cols_ % stride != 0) return subsample(fft::inverse(X), stride);
    // Subsampling by s folds the spectrum onto an (N/s)-point grid.
    const int R = rows_ / stride;
    const int C = cols_ / stride;
    ComplexMap F(R, C);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) F(r % R, c % C) += X(r, c);
    const double scale = 1.0 / (double(stride) * stride);
    for (auto& v : F.data()) v *= scale;
    return fft::inverse(F);
}

Boundary parse_boundary(std::string_view s) {
    if (s == "zero") return Boundary::Zero;
    if (s == "symmetric") return Boundary::Symmetric;
    if (s == "periodic") return Boundary::Periodic;
    throw std::invalid_argument("unknown boundary '" + std::string(s) + "' (zero, symmetric, periodic)");
}

const char* to_string(Boundary b) {
    switch (b) {
        case Boundary::Zero: return "zero";
        case Boundary::Symmetric: return "symmetric";
        case Boundary::Periodic: return "periodic";
    }
    return "?";
}

double sample_extended(const FeatureMap& x, int r, int c, Boundary boundary) {
    const int rr = extend_index(r, x.rows(), boundary);
    const int cc = extend_index(c, x.cols(), boundary);
    return (rr < 0 || cc < 0) ? 0.0 : x(rr, cc);
}

FeatureMap cross_correlate(const FeatureMap& x, const FeatureMap& v, const CorrelateOptions& opt) {
    return correlate(x, v, opt);
}

ComplexMap cross_correlate(const FeatureMap& x, const ComplexMap& v, const CorrelateOptions& opt) {
    return correlate(x, v, opt);
}

MultiChannelMap conv_layer(const MultiChannelMap& X, const KernelTensor& V, int m, Boundary boundary) {
    return conv_layer_impl(X, V, m, boundary);
}

MultiChannelComplex conv_layer(const MultiChannelMap& X, const ComplexKernelTensor& V, int m,
                               Boundary boundary) {
    return conv_layer_impl(X, V, m, boundary);
}

FeatureMap relu(const FeatureMap& y) {
    FeatureMap out = y;
    for (auto& v : out.data()) v = std::max(v, 0.0);
    return out;
}

FeatureMap bias_relu(const FeatureMap& y, double b) {
    FeatureMap out = y;
    for (auto& v : out.data()) v = std::max(v + b, 0.0);
    return out;
}

FeatureMap max_pool(const FeatureMap& y, Boundary boundary) {
    const int rows = (y.rows() + 1) / 2;
    const int cols = (y.cols() + 1) / 2;
    FeatureMap out(rows, cols);
    const bool wrap = boundary == Boundary::Periodic;
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            double best = -std::numeric_limits<double>::infinity();
            for (int a = -1; a <= 1; ++a)
                for (int b = -1; b <= 1; ++b) {
                    int r = 2 * i + a;
                    int c = 2 * j + b;
                    if (wrap) {
                        r = extend_index(r, y.rows(), Boundary::Periodic);
                        c = extend_index(c, y.cols(), Boundary::Periodic);
                    } else if (r < 0 || c < 0 || r >= y.rows() || c >= y.cols()) {
                        continue;
                    }
                    best = std::max(best, y(r, c));
                }
            out(i, j) = best;
        }
    return out;
}

FeatureMap modulus(const ComplexMap& z) {
    FeatureMap out(z.rows(), z.cols());
    for (std::size_t i = 0; i < z.size(); ++i) out.data()[i] = std::abs(z.data()[i]);
    return out;
}

MultiChannelMap rmax(const MultiChannelMap& X, const KernelTensor& V, int m, Boundary boundary) {
    MultiChannelMap out;
    for (const auto& y : conv_layer(X, V, m, boundary)) out.push_back(max_pool(y, boundary));
    return out;
}

MultiChannelMap cmod(const MultiChannelMap& X, const ComplexKernelTensor& W, int m, Boundary boundary) {
    if (m < 1) throw std::invalid_argument("cmod: stride must be >= 1");
    MultiChannelMap out;
    for (const auto& z : conv_layer(X, W, 2 * m, boundary)) out.push_back(modulus(z));
    return out;
}

std::vector<double> binomial_row(int size) {
    if (size < 1) throw std::invalid_argument("binomial filter size must be >= 1");
    std::vector<double> row{1.0};
    for (int n = 1; n < size; ++n) {
        std::vector<double> next(row.size() + 1, 0.0);
        for (std::size_t k = 0; k < row.size(); ++k) {
            next[k] += 0.5 * row[k];
            next[k + 1] += 0.5 * row[k];
        }
        row = std::move(next);
    }
    return row;
}

FeatureMap blur_pool(const FeatureMap& y, int size, Boundary boundary) {
    const auto row = binomial_row(size);
    FeatureMap kernel(size, size);
    for (int a = 0; a < size; ++a)
        for (int b = 0; b < size; ++b) kernel(a, b) = row[a] * row[b];
    kernel.set_origin({(size - 1) / 2, (size - 1) / 2});
    return cross_correlate(y, kernel, {boundary, 2, ConvMethod::Direct});
}

}  // namespace wavetwin

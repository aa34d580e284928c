#include "wavetwin/map.hpp"

#include <cmath>

namespace wavetwin {

FeatureMap real_part(const ComplexMap& z) {
    FeatureMap out(z.rows(), z.cols());
    out.set_origin(z.origin());
    std::ranges::transform(z.data(), out.data().begin(), [](cplx v) { return v.real(); });
    return out;
}

FeatureMap imag_part(const ComplexMap& z) {
    FeatureMap out(z.rows(), z.cols());
    out.set_origin(z.origin());
    std::ranges::transform(z.data(), out.data().begin(), [](cplx v) { return v.imag(); });
    return out;
}

ComplexMap to_complex(const FeatureMap& x) {
    ComplexMap out(x.rows(), x.cols());
    out.set_origin(x.origin());
    std::ranges::transform(x.data(), out.data().begin(), [](double v) { return cplx(v, 0.0); });
    return out;
}

ComplexMap conj(const ComplexMap& z) {
    ComplexMap out(z.rows(), z.cols());
    out.set_origin(z.origin());
    std::ranges::transform(z.data(), out.data().begin(), [](cplx v) { return std::conj(v); });
    return out;
}

double l2_norm(const FeatureMap& x) {
    double s = 0.0;
    for (double v : x.data()) s += v * v;
    return std::sqrt(s);
}

double l2_norm(const ComplexMap& z) {
    double s = 0.0;
    for (cplx v : z.data()) s += std::norm(v);
    return std::sqrt(s);
}

double max_abs(const FeatureMap& x) {
    double m = 0.0;
    for (double v : x.data()) m = std::max(m, std::abs(v));
    return m;
}

double max_abs_diff(const FeatureMap& a, const FeatureMap& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

double max_abs_diff(const ComplexMap& a, const ComplexMap& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

}  // namespace wavetwin

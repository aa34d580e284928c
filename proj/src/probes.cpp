#include "wavetwin/probes.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "wavetwin/fft.hpp"

namespace wavetwin {

FeatureMap render(const std::vector<Sinusoid>& terms, int rows, int cols, double shift_y, double shift_x) {
    FeatureMap out(rows, cols);
    std::vector<double> cy(rows), sy(rows), cx(cols), sx(cols);
    for (const auto& t : terms) {
        // cos(a + b) = cos a cos b - sin a sin b, separated by axis
        for (int r = 0; r < rows; ++r) {
            const double a = t.wy * (r + shift_y) + t.phase;
            cy[r] = t.amplitude * std::cos(a);
            sy[r] = t.amplitude * std::sin(a);
        }
        for (int c = 0; c < cols; ++c) {
            const double b = t.wx * (c + shift_x);
            cx[c] = std::cos(b);
            sx[c] = std::sin(b);
        }
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) out(r, c) += cy[r] * cx[c] - sy[r] * sx[c];
    }
    return out;
}

std::vector<Sinusoid> bandlimited_probe(std::array<double, 2> lo_yx, std::array<double, 2> hi_yx, int count,
                                        std::uint64_t seed, int period) {
    if (count < 1) throw std::invalid_argument("bandlimited_probe: count must be >= 1");
    const double two_pi = 2.0 * std::numbers::pi;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto draw = [&](int axis) {
        double w = lo_yx[axis] + (hi_yx[axis] - lo_yx[axis]) * unit(rng);
        if (period > 0) {
            // nearest grid frequency that stays inside the box
            const double step = two_pi / period;
            const double snapped = std::round(w / step) * step;
            if (snapped >= lo_yx[axis] && snapped <= hi_yx[axis]) return snapped;
            const double up = std::ceil(lo_yx[axis] / step) * step;
            if (up <= hi_yx[axis]) return up;
            throw std::invalid_argument("bandlimited_probe: box contains no grid frequency");
        }
        return w;
    };
    std::vector<Sinusoid> out;
    double power = 0.0;
    for (int i = 0; i < count; ++i) {
        Sinusoid s;
        s.wy = draw(0);
        s.wx = draw(1);
        s.amplitude = 0.5 + unit(rng);
        s.phase = two_pi * unit(rng);
        power += 0.5 * s.amplitude * s.amplitude;
        out.push_back(s);
    }
    for (auto& s : out) s.amplitude /= std::sqrt(power);
    return out;
}

FeatureMap natural_like_image(int size, std::uint64_t seed, double exponent) {
    if (size < 2) throw std::invalid_argument("natural_like_image: size must be >= 2");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    ComplexMap spec(size, size);
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) {
            const double wy = fft::bin_frequency(r, size);
            const double wx = fft::bin_frequency(c, size);
            const double rad = std::hypot(wx, wy);
            if (rad == 0.0) continue;
            spec(r, c) = cplx(gauss(rng), gauss(rng)) / std::pow(rad, exponent);
        }
    const ComplexMap field = fft::inverse(spec);
    FeatureMap img = real_part(field);
    double mean = 0.0;
    for (double v : img.data()) mean += v;
    mean /= static_cast<double>(img.size());
    double var = 0.0;
    for (double v : img.data()) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / static_cast<double>(img.size()));
    for (auto& v : img.data()) v = 0.5 + 0.2 * (v - mean) / sd;
    return img;
}

}  // namespace wavetwin

#include "wavetwin/packet_bank.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wavetwin/fft.hpp"
#include "wavetwin/spectral.hpp"

namespace wavetwin {
namespace {

constexpr double kPi = std::numbers::pi;

struct Aligned1D {
    std::vector<double> a, b;
    int start = 0;
};

// Put both trees' filters on a common support.
Aligned1D align(const EquivalentFilter& fa, const EquivalentFilter& fb) {
    const int start = std::min(fa.start, fb.start);
    const int end = std::max(fa.start + static_cast<int>(fa.taps.size()),
                             fb.start + static_cast<int>(fb.taps.size()));
    Aligned1D out;
    out.start = start;
    out.a.assign(end - start, 0.0);
    out.b.assign(end - start, 0.0);
    for (std::size_t k = 0; k < fa.taps.size(); ++k) out.a[fa.start - start + k] = fa.taps[k];
    for (std::size_t k = 0; k < fb.taps.size(); ++k) out.b[fb.start - start + k] = fb.taps[k];
    return out;
}

double positive_fraction_1d(const std::vector<double>& a, const std::vector<double>& b, int sign) {
    const int n = 1024;
    ComplexMap sig(1, n);
    for (std::size_t k = 0; k < a.size(); ++k) sig(0, static_cast<int>(k)) = cplx(a[k], sign * b[k]);
    const ComplexMap spec = fft::forward(sig);
    double pos = 0.0, total = 0.0;
    for (int c = 0; c < n; ++c) {
        const double e = std::norm(spec(0, c));
        total += e;
        if (2 * c == n || c == 0) pos += 0.5 * e;
        else if (2 * c < n) pos += e;
    }
    return pos / total;
}

std::array<double, 2> spectral_centroid(const ComplexMap& kernel, std::array<double, 2> around) {
    const int g = 128;
    const FeatureMap power = kernel_spectrum(kernel, g);  // DC at (g/2, g/2)
    double sx = 0.0, sy = 0.0, tot = 0.0;
    for (int r = 0; r < g; ++r)
        for (int c = 0; c < g; ++c) {
            double xi1 = 2.0 * kPi * (c - g / 2) / g;
            double xi2 = 2.0 * kPi * (r - g / 2) / g;
            // unwrap to the 2pi-period nearest the nominal cell
            xi1 += 2.0 * kPi * std::round((around[0] - xi1) / (2.0 * kPi));
            xi2 += 2.0 * kPi * std::round((around[1] - xi2) / (2.0 * kPi));
            const double e = power(r, c);
            sx += e * xi1;
            sy += e * xi2;
            tot += e;
        }
    return {sx / tot, sy / tot};
}

}  // namespace

const char* to_string(PacketClass c) {
    switch (c) {
        case PacketClass::Lowpass: return "lowpass";
        case PacketClass::Boundary: return "boundary";
        case PacketClass::Bandpass: return "bandpass";
    }
    return "?";
}

int PacketBank::index_of(int sigma, int fy, int fx) const {
    const int n = 1 << depth;
    if (fy < 0 || fx < 0 || fy >= n || fx >= n || (sigma != 1 && sigma != -1))
        throw std::out_of_range("PacketBank::index_of: no such cell");
    return (sigma == 1 ? 0 : n * n) + fy * n + fx;
}

std::array<int, 2> PacketBank::lowpass_indices() const {
    return {index_of(1, 0, 0), index_of(-1, 0, 0)};
}

PacketBank build_packet_bank(const FilterPair& pair, int depth) {
    if (depth < 1 || depth > 3)
        throw std::invalid_argument("build_packet_bank: J must be 1, 2 or 3 (got " +
                                    std::to_string(depth) + ")");
    const auto fa = equivalent_filters_1d(pair, Tree::A, depth);
    const auto fb = equivalent_filters_1d(pair, Tree::B, depth);
    const int n = 1 << depth;

    PacketBank bank;
    bank.depth = depth;
    bank.pair = pair;
    std::vector<Aligned1D> pairs;
    for (int f = 0; f < n; ++f) {
        Aligned1D al = align(fa[f], fb[f]);
        const int sign = positive_fraction_1d(al.a, al.b, 1) >= positive_fraction_1d(al.a, al.b, -1) ? 1 : -1;
        bank.analytic_sign.push_back(sign);
        for (auto& v : al.b) v *= sign;
        pairs.push_back(std::move(al));
    }

    const int half = 2 * n * n;
    bank.kernels.resize(2 * half);
    bank.cells.resize(2 * half);
    bank.cell_centers.resize(2 * half);
    const double width = kPi / n;
    for (int sigma : {1, -1})
        for (int fy = 0; fy < n; ++fy)
            for (int fx = 0; fx < n; ++fx) {
                const auto& py = pairs[fy];
                const auto& px = pairs[fx];
                const int rows = static_cast<int>(py.a.size());
                const int cols = static_cast<int>(px.a.size());
                // w = (A_x + i B_x)(A_y + i sigma B_y) / 2
                ComplexMap k(rows, cols);
                for (int r = 0; r < rows; ++r)
                    for (int c = 0; c < cols; ++c) {
                        const double re = px.a[c] * py.a[r] - sigma * px.b[c] * py.b[r];
                        const double im = px.b[c] * py.a[r] + sigma * px.a[c] * py.b[r];
                        k(r, c) = 0.5 * cplx(re, im);
                    }
                k.set_origin({-py.start, -px.start});

                const int idx = bank.index_of(sigma, fy, fx);
                PacketCell cell;
                cell.sigma = sigma;
                cell.fy = fy;
                cell.fx = fx;
                cell.kind = (fx == 0 && fy == 0)         ? PacketClass::Lowpass
                            : (fx == n - 1 || fy == n - 1) ? PacketClass::Boundary
                                                           : PacketClass::Bandpass;
                cell.nominal_center = {(fx + 0.5) * width, sigma * (fy + 0.5) * width};

                PacketCell mirror = cell;
                mirror.conjugate = true;
                mirror.nominal_center = {-cell.nominal_center[0], -cell.nominal_center[1]};

                bank.cell_centers[idx] = spectral_centroid(k, cell.nominal_center);
                bank.cell_centers[idx + half] = {-bank.cell_centers[idx][0], -bank.cell_centers[idx][1]};
                bank.kernels[idx + half] = conj(k);
                bank.kernels[idx] = std::move(k);
                bank.cells[idx] = cell;
                bank.cells[idx + half] = mirror;
            }
    for (int i = 0; i < half; ++i) bank.halfplane_mask.push_back(i);
    return bank;
}

std::vector<KernelDiagnostics> diagnose_bank(const PacketBank& bank, int gridsize) {
    std::vector<KernelDiagnostics> out;
    for (int idx : bank.halfplane_mask) {
        const auto& k = bank.kernels[idx];
        KernelDiagnostics d;
        d.index = idx;
        d.positive_fraction = positive_xi1_fraction(k, gridsize);
        d.norm_balance = l2_norm(real_part(k)) / l2_norm(imag_part(k));
        out.push_back(d);
    }
    return out;
}

FeatureMap bank_power_sum(const PacketBank& bank, int gridsize) {
    FeatureMap total(gridsize, gridsize);
    for (const auto& k : bank.kernels) {
        const FeatureMap p = kernel_spectrum(k, gridsize);
        for (std::size_t i = 0; i < p.size(); ++i) total.data()[i] += p.data()[i];
    }
    return total;
}

}  // namespace wavetwin

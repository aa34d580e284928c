#pragma once

#include <array>
#include <vector>

#include "wavetwin/filters.hpp"
#include "wavetwin/map.hpp"
#include "wavetwin/wpt.hpp"

namespace wavetwin {

enum class PacketClass { Lowpass, Boundary, Bandpass };
const char* to_string(PacketClass c);

/// Fourier cell of one complex packet kernel.
///
/// The analytic half-plane kernels cover xi_1 in [fx, fx+1] * pi/2^J and
/// xi_2 in sigma * [fy, fy+1] * pi/2^J. Conjugate kernels mirror the cell
/// through the origin.
struct PacketCell {
    int sigma = 1;            // +1: xi_2 >= 0, -1: xi_2 <= 0
    int fy = 0;               // |xi_2| band, natural order
    int fx = 0;               // xi_1 band, natural order
    bool conjugate = false;   // true for the negative-xi_1 mirror kernels
    PacketClass kind = PacketClass::Bandpass;
    std::array<double, 2> nominal_center{};  // (xi_1, xi_2)
};

/// The 4 x 4^J complex Gabor-like kernels generated by the dual-tree packet
/// transform, in cross-correlation form: (x * w)[n] = sum_k x[n + k] w[k].
///
/// Indices [0, 2*4^J) are the half-plane (xi_1 >= 0) kernels, ordered
/// sigma block (+ then -), then fy, then fx; index i + 2*4^J is conj(kernel i).
struct PacketBank {
    int depth = 0;
    FilterPair pair;  // filters the kernels were generated from
    std::vector<ComplexMap> kernels;
    std::vector<PacketCell> cells;
    std::vector<std::array<double, 2>> cell_centers;  // spectral centroids
    std::vector<int> halfplane_mask;

    /// Analytic sign per 1D packet (natural order): psi_a + i*sign*psi_b is
    /// the positive-frequency combination.
    std::vector<int> analytic_sign;

    [[nodiscard]] int size() const { return static_cast<int>(kernels.size()); }
    [[nodiscard]] int halfplane_count() const { return static_cast<int>(halfplane_mask.size()); }

    /// Half-plane index of cell (sigma, fy, fx).
    [[nodiscard]] int index_of(int sigma, int fy, int fx) const;

    /// The two half-plane lowpass kernels (fy = fx = 0).
    [[nodiscard]] std::array<int, 2> lowpass_indices() const;
};

PacketBank build_packet_bank(const FilterPair& pair, int depth);

/// Per-kernel quality numbers for the half-plane kernels.
struct KernelDiagnostics {
    int index = 0;
    double positive_fraction = 0.0;  // energy share at xi_1 >= 0
    double norm_balance = 0.0;       // |Re| / |Im|
};
std::vector<KernelDiagnostics> diagnose_bank(const PacketBank& bank, int gridsize = 256);

/// Pointwise sum of all kernel power spectra (DC-centered), for tiling checks.
FeatureMap bank_power_sum(const PacketBank& bank, int gridsize = 128);

}  // namespace wavetwin

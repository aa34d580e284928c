#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "wavetwin/map.hpp"
#include "wavetwin/ops.hpp"
#include "wavetwin/packet_bank.hpp"

namespace wavetwin {

/// A set of half-plane packets mixed into `out` output channels.
struct PacketGroup {
    std::vector<int> packets;
    int out = 1;
    double lambda = 0.0;
};

struct TwinConfig {
    std::string arch;
    std::string filters = "qshift10";
    int m = 2;
    int J = 2;
    int L_low = 0;
    int L_high = 0;
    std::vector<PacketGroup> groups;
    std::array<double, 3> mu{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};

    /// Throws std::invalid_argument describing the first violated constraint.
    void validate() const;

    /// Packets in group order: the rows of the selection matrix.
    [[nodiscard]] std::vector<int> selected_packets() const;
    [[nodiscard]] std::vector<int> group_sizes() const;
};

TwinConfig parse_twin_config(std::string_view json_text);
TwinConfig load_twin_config(const std::string& path);
std::string to_json(const TwinConfig& cfg);

/// Dense row-major L_q x n_q matrix.
struct MixingMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    MixingMatrix() = default;
    MixingMatrix(int r, int c, std::vector<double> values = {});
    double& operator()(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

/// One-hot rows with a uniformly random column per row.
std::vector<MixingMatrix> one_hot_mixing(const TwinConfig& cfg, std::uint64_t seed);
/// Standard normal entries.
std::vector<MixingMatrix> random_mixing(const TwinConfig& cfg, std::uint64_t seed);

/// sum_k mu_k x_k; mu must lie on the probability simplex.
FeatureMap luminance(const MultiChannelMap& X, const std::array<double, 3>& mu);

/// Real parts of all 4 x 4^J packet responses at stride 2^(J-1), computed
/// with the separable dual tree (periodic extension).
MultiChannelMap dt_features(const FeatureMap& x, const PacketBank& bank);

/// Complex packet responses at stride 2^J (decimated dual tree).
MultiChannelComplex dt_features_complex(const FeatureMap& x, const PacketBank& bank);

/// Same quantities by direct periodic cross-correlation with the kernels.
MultiChannelMap dt_features_direct(const FeatureMap& x, const PacketBank& bank);
MultiChannelComplex dt_features_complex_direct(const FeatureMap& x, const PacketBank& bank);

/// Reorder/select channels: output i is D[rows[i]]. Indices must be distinct,
/// in range and not listed in `excluded`.
template <typename T>
MultiChannel<T> select_permute(const MultiChannel<T>& D, const std::vector<int>& rows,
                               const std::vector<int>& excluded = {}) {
    std::vector<char> used(static_cast<std::size_t>(D.channels()), 0);
    MultiChannel<T> out;
    for (int r : rows) {
        if (r < 0 || r >= D.channels())
            throw std::invalid_argument("select_permute: index " + std::to_string(r) + " outside [0, " +
                                        std::to_string(D.channels()) + ")");
        if (used[static_cast<std::size_t>(r)])
            throw std::invalid_argument("select_permute: duplicate index " + std::to_string(r));
        for (int e : excluded)
            if (e == r) throw std::invalid_argument("select_permute: index " + std::to_string(r) + " is excluded");
        used[static_cast<std::size_t>(r)] = 1;
        out.push_back(D[r]);
    }
    return out;
}

/// Channels that never enter a block: the lowpass kernels and their conjugates.
std::vector<int> excluded_packets(const PacketBank& bank);

/// Slice D' into consecutive groups of the given sizes and apply A[q] to each.
MultiChannelMap group_mix(const MultiChannelMap& D, const std::vector<int>& sizes,
                          const std::vector<MixingMatrix>& A);
MultiChannelComplex group_mix(const MultiChannelComplex& D, const std::vector<int>& sizes,
                              const std::vector<MixingMatrix>& A);

/// sum_q lambda_q sum_l (|a_l|_1 / |a_l|_inf - 1).
double sparsity_penalty(const std::vector<MixingMatrix>& A, const std::vector<double>& lambda);

/// A subgradient of sparsity_penalty (exact gradient where the row maximum
/// is unique and no entry is zero).
std::vector<MixingMatrix> sparsity_subgradient(const std::vector<MixingMatrix>& A,
                                               const std::vector<double>& lambda);

std::vector<double> group_lambdas(const TwinConfig& cfg);

/// Real wavelet block: luminance, dt_features, selection, grouped mixing.
/// X has 1 (already luminance) or 3 channels.
MultiChannelMap wblock_forward(const MultiChannelMap& X, const TwinConfig& cfg, const PacketBank& bank,
                               const std::vector<MixingMatrix>& A);
/// Complex wavelet block: the same pipeline on complex packets, then modulus.
MultiChannelMap cwblock_forward(const MultiChannelMap& X, const TwinConfig& cfg, const PacketBank& bank,
                                const std::vector<MixingMatrix>& A);

/// relu(u / sqrt(mean(u^2) / 2 + eps) + b).
FeatureMap bn0(const FeatureMap& u, double b, double eps);

struct PropCheck {
    double value = 0.0;
    bool degenerate = false;  // zero response; value set by convention
};

/// |sum_n Y[n]| / |Y|_1 with Y = (x * Re w) downarrow m.
PropCheck verify_prop1(const ComplexMap& w, const FeatureMap& x, int m,
                       Boundary boundary = Boundary::Periodic);

/// |Y|^2 / (2 |U|^2) with U = |(x * w) downarrow 2m|; 1 for a zero response.
PropCheck verify_prop2(const ComplexMap& w, const FeatureMap& x, int m,
                       Boundary boundary = Boundary::Periodic);

/// Complex kernel on a size x size periodic grid whose DFT is supported
/// strictly inside the cell (cx, cy) * pi/m + (0, pi/m)^2, so it meets the
/// bandwidth assumptions of both propositions exactly.
ComplexMap synthetic_bandlimited_kernel(int size, int m, int cell_x, int cell_y, std::uint64_t seed);

}  // namespace wavetwin

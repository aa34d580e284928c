#include "wavetwin/twinblock.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "wavetwin/fft.hpp"
#include "wavetwin/wpt.hpp"

namespace wavetwin {
namespace {

using nlohmann::json;

constexpr double kSimplexTol = 1e-9;

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument("TwinConfig: " + msg);
}

int pow4(int j) { return 1 << (2 * j); }

template <typename T>
MultiChannel<T> group_mix_impl(const MultiChannel<T>& D, const std::vector<int>& sizes,
                               const std::vector<MixingMatrix>& A) {
    if (sizes.size() != A.size())
        throw std::invalid_argument("group_mix: " + std::to_string(sizes.size()) + " groups but " +
                                    std::to_string(A.size()) + " matrices");
    int total = 0;
    for (int s : sizes) total += s;
    if (total != D.channels())
        throw std::invalid_argument("group_mix: group sizes cover " + std::to_string(total) +
                                    " channels, input has " + std::to_string(D.channels()));
    MultiChannel<T> out;
    int base = 0;
    for (std::size_t q = 0; q < A.size(); ++q) {
        const auto& a = A[q];
        if (a.cols != sizes[q])
            throw std::invalid_argument("group_mix: matrix " + std::to_string(q) + " has " +
                                        std::to_string(a.cols) + " columns for a group of " +
                                        std::to_string(sizes[q]));
        for (int l = 0; l < a.rows; ++l) {
            Map2D<T> acc(D.rows(), D.cols());
            for (int j = 0; j < a.cols; ++j) {
                const double c = a(l, j);
                if (c == 0.0) continue;
                const auto& src = D[base + j];
                for (std::size_t i = 0; i < acc.size(); ++i) acc.data()[i] += c * src.data()[i];
            }
            out.push_back(std::move(acc));
        }
        base += sizes[q];
    }
    return out;
}

struct RowStats {
    double l1 = 0.0;
    double linf = 0.0;
    int argmax = -1;
};

RowStats row_stats(const MixingMatrix& a, int l) {
    RowStats s;
    for (int j = 0; j < a.cols; ++j) {
        const double v = std::abs(a(l, j));
        s.l1 += v;
        if (v > s.linf) {
            s.linf = v;
            s.argmax = j;
        }
    }
    return s;
}

void check_lambdas(const std::vector<MixingMatrix>& A, const std::vector<double>& lambda) {
    if (A.size() != lambda.size())
        throw std::invalid_argument("sparsity_penalty: one lambda per group required");
    for (double l : lambda)
        if (!(l >= 0.0)) throw std::invalid_argument("sparsity_penalty: lambda must be >= 0");
}

// Combine the four tree outputs into complex packet responses.
// Re = (AA - sigma s_x s_y BB) / 2, Im = (s_x AB + sigma s_y BA) / 2.
template <typename Emit>
void combine_trees(const PacketBank& bank, const std::array<std::vector<FeatureMap>, 4>& t, Emit&& emit) {
    const int n = 1 << bank.depth;
    const int half = 2 * n * n;
    for (int idx = 0; idx < half; ++idx) {
        const auto& cell = bank.cells[static_cast<std::size_t>(idx)];
        const int p = cell.fy * n + cell.fx;
        const double sx = bank.analytic_sign[static_cast<std::size_t>(cell.fx)];
        const double sy = bank.analytic_sign[static_cast<std::size_t>(cell.fy)];
        const double sigma = cell.sigma;
        const auto& aa = t[0][p];
        const auto& ab = t[1][p];
        const auto& ba = t[2][p];
        const auto& bb = t[3][p];
        ComplexMap z(aa.rows(), aa.cols());
        for (std::size_t i = 0; i < z.size(); ++i)
            z.data()[i] = 0.5 * cplx(aa.data()[i] - sigma * sx * sy * bb.data()[i],
                                     sx * ab.data()[i] + sigma * sy * ba.data()[i]);
        emit(idx, std::move(z));
    }
}

std::array<std::vector<FeatureMap>, 4> all_trees(const FeatureMap& x, const PacketBank& bank, bool undecimated) {
    std::array<std::vector<FeatureMap>, 4> t;
    const TreeCombo combos[4] = {TreeCombo::AA, TreeCombo::AB, TreeCombo::BA, TreeCombo::BB};
    for (int i = 0; i < 4; ++i) t[i] = wpt_forward(x, bank.pair, combos[i], bank.depth, undecimated);
    return t;
}

}  // namespace

// ---------------------------------------------------------------- config

std::vector<int> TwinConfig::selected_packets() const {
    std::vector<int> out;
    for (const auto& g : groups) out.insert(out.end(), g.packets.begin(), g.packets.end());
    return out;
}

std::vector<int> TwinConfig::group_sizes() const {
    std::vector<int> out;
    for (const auto& g : groups) out.push_back(static_cast<int>(g.packets.size()));
    return out;
}

void TwinConfig::validate() const {
    require(J >= 1 && J <= 3, "J must be 1, 2 or 3 (got " + std::to_string(J) + ")");
    require(m == (1 << (J - 1)), "m must equal 2^(J-1) = " + std::to_string(1 << (J - 1)) +
                                     " (got " + std::to_string(m) + ")");
    require(L_low >= 0 && L_high >= 0, "channel counts must be non-negative");
    double sum = 0.0;
    for (double v : mu) {
        require(v >= 0.0 && v <= 1.0, "mu entries must lie in [0, 1]");
        sum += v;
    }
    require(std::abs(sum - 1.0) <= kSimplexTol, "mu must sum to 1");

    const int half = 2 * pow4(J);
    const std::set<int> lowpass{0, pow4(J)};
    std::set<int> seen;
    int outputs = 0;
    for (std::size_t q = 0; q < groups.size(); ++q) {
        const auto& g = groups[q];
        const std::string where = "group " + std::to_string(q) + ": ";
        require(!g.packets.empty(), where + "no packets");
        require(g.out >= 1, where + "out must be >= 1");
        require(g.lambda >= 0.0, where + "lambda must be >= 0");
        for (int p : g.packets) {
            require(p >= 0 && p < half, where + "packet " + std::to_string(p) + " outside [0, " +
                                            std::to_string(half) + ")");
            require(!lowpass.count(p), where + "packet " + std::to_string(p) + " is a lowpass kernel");
            require(seen.insert(p).second, where + "packet " + std::to_string(p) + " used twice");
        }
        outputs += g.out;
    }
    require(outputs == L_high, "group outputs sum to " + std::to_string(outputs) + ", L_high is " +
                                   std::to_string(L_high));
}

TwinConfig parse_twin_config(std::string_view json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("TwinConfig: malformed JSON: ") + e.what());
    }
    TwinConfig cfg;
    try {
        cfg.arch = j.at("arch").get<std::string>();
        cfg.m = j.at("m").get<int>();
        cfg.J = j.at("J").get<int>();
        cfg.L_low = j.at("L_low").get<int>();
        cfg.L_high = j.at("L_high").get<int>();
        if (j.contains("filters")) cfg.filters = j.at("filters").get<std::string>();
        if (j.contains("mu")) {
            const auto mu = j.at("mu").get<std::vector<double>>();
            require(mu.size() == 3, "mu must have 3 entries");
            cfg.mu = {mu[0], mu[1], mu[2]};
        }
        for (const auto& g : j.at("groups")) {
            PacketGroup pg;
            pg.packets = g.at("packets").get<std::vector<int>>();
            pg.out = g.at("out").get<int>();
            if (g.contains("lambda") && !g.at("lambda").is_null()) pg.lambda = g.at("lambda").get<double>();
            cfg.groups.push_back(std::move(pg));
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("TwinConfig: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

TwinConfig load_twin_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_twin_config(ss.str());
}

std::string to_json(const TwinConfig& cfg) {
    json j;
    j["arch"] = cfg.arch;
    j["filters"] = cfg.filters;
    j["m"] = cfg.m;
    j["J"] = cfg.J;
    j["L_low"] = cfg.L_low;
    j["L_high"] = cfg.L_high;
    j["mu"] = std::vector<double>(cfg.mu.begin(), cfg.mu.end());
    j["groups"] = json::array();
    for (const auto& g : cfg.groups)
        j["groups"].push_back({{"packets", g.packets}, {"out", g.out}, {"lambda", g.lambda}});
    return j.dump(2);
}

// ---------------------------------------------------------------- mixing

MixingMatrix::MixingMatrix(int r, int c, std::vector<double> values) : rows(r), cols(c), a(std::move(values)) {
    if (r < 0 || c < 0) throw std::invalid_argument("MixingMatrix: negative shape");
    if (a.empty()) a.assign(static_cast<std::size_t>(r) * c, 0.0);
    if (a.size() != static_cast<std::size_t>(r) * c)
        throw std::invalid_argument("MixingMatrix: value count does not match shape");
}

std::vector<MixingMatrix> one_hot_mixing(const TwinConfig& cfg, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<MixingMatrix> out;
    for (const auto& g : cfg.groups) {
        const int n = static_cast<int>(g.packets.size());
        MixingMatrix a(g.out, n);
        std::uniform_int_distribution<int> pick(0, n - 1);
        for (int l = 0; l < g.out; ++l) a(l, pick(rng)) = 1.0;
        out.push_back(std::move(a));
    }
    return out;
}

std::vector<MixingMatrix> random_mixing(const TwinConfig& cfg, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::vector<MixingMatrix> out;
    for (const auto& g : cfg.groups) {
        MixingMatrix a(g.out, static_cast<int>(g.packets.size()));
        for (auto& v : a.a) v = gauss(rng);
        out.push_back(std::move(a));
    }
    return out;
}

MultiChannelMap group_mix(const MultiChannelMap& D, const std::vector<int>& sizes,
                          const std::vector<MixingMatrix>& A) {
    return group_mix_impl(D, sizes, A);
}

MultiChannelComplex group_mix(const MultiChannelComplex& D, const std::vector<int>& sizes,
                              const std::vector<MixingMatrix>& A) {
    return group_mix_impl(D, sizes, A);
}

double sparsity_penalty(const std::vector<MixingMatrix>& A, const std::vector<double>& lambda) {
    check_lambdas(A, lambda);
    double total = 0.0;
    for (std::size_t q = 0; q < A.size(); ++q) {
        double group = 0.0;
        for (int l = 0; l < A[q].rows; ++l) {
            const RowStats s = row_stats(A[q], l);
            if (s.linf == 0.0)
                throw std::invalid_argument("sparsity_penalty: row " + std::to_string(l) + " of group " +
                                            std::to_string(q) + " is zero");
            group += s.l1 / s.linf - 1.0;
        }
        total += lambda[q] * group;
    }
    return total;
}

std::vector<MixingMatrix> sparsity_subgradient(const std::vector<MixingMatrix>& A,
                                               const std::vector<double>& lambda) {
    check_lambdas(A, lambda);
    std::vector<MixingMatrix> grad;
    for (std::size_t q = 0; q < A.size(); ++q) {
        const auto& a = A[q];
        MixingMatrix g(a.rows, a.cols);
        for (int l = 0; l < a.rows; ++l) {
            const RowStats s = row_stats(a, l);
            if (s.linf == 0.0) throw std::invalid_argument("sparsity_subgradient: zero row");
            auto sgn = [](double v) { return double((v > 0) - (v < 0)); };
            for (int j = 0; j < a.cols; ++j) g(l, j) = lambda[q] * sgn(a(l, j)) / s.linf;
            g(l, s.argmax) -= lambda[q] * s.l1 / (s.linf * s.linf) * sgn(a(l, s.argmax));
        }
        grad.push_back(std::move(g));
    }
    return grad;
}

std::vector<double> group_lambdas(const TwinConfig& cfg) {
    std::vector<double> out;
    for (const auto& g : cfg.groups) out.push_back(g.lambda);
    return out;
}

// ---------------------------------------------------------------- features

FeatureMap luminance(const MultiChannelMap& X, const std::array<double, 3>& mu) {
    if (X.channels() != 3) throw std::invalid_argument("luminance: expected 3 channels");
    double sum = 0.0;
    for (double v : mu) {
        if (v < 0.0 || v > 1.0) throw std::invalid_argument("luminance: mu entries must lie in [0, 1]");
        sum += v;
    }
    if (std::abs(sum - 1.0) > kSimplexTol) throw std::invalid_argument("luminance: mu must sum to 1");
    FeatureMap out(X.rows(), X.cols());
    for (int k = 0; k < 3; ++k)
        for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += mu[k] * X[k].data()[i];
    return out;
}

MultiChannelMap dt_features(const FeatureMap& x, const PacketBank& bank) {
    const auto trees = all_trees(x, bank, true);
    const int half = bank.halfplane_count();
    std::vector<FeatureMap> maps(static_cast<std::size_t>(2 * half));
    combine_trees(bank, trees, [&](int idx, ComplexMap z) {
        maps[idx] = real_part(z);
        maps[idx + half] = maps[idx];
    });
    return MultiChannelMap(std::move(maps));
}

MultiChannelComplex dt_features_complex(const FeatureMap& x, const PacketBank& bank) {
    const auto trees = all_trees(x, bank, false);
    const int half = bank.halfplane_count();
    std::vector<ComplexMap> maps(static_cast<std::size_t>(2 * half));
    combine_trees(bank, trees, [&](int idx, ComplexMap z) {
        maps[idx + half] = conj(z);
        maps[idx] = std::move(z);
    });
    return MultiChannelComplex(std::move(maps));
}

MultiChannelMap dt_features_direct(const FeatureMap& x, const PacketBank& bank) {
    const int stride = 1 << (bank.depth - 1);
    MultiChannelMap out;
    for (const auto& k : bank.kernels)
        out.push_back(cross_correlate(x, real_part(k), {Boundary::Periodic, stride}));
    return out;
}

MultiChannelComplex dt_features_complex_direct(const FeatureMap& x, const PacketBank& bank) {
    const int stride = 1 << bank.depth;
    MultiChannelComplex out;
    for (const auto& k : bank.kernels) out.push_back(cross_correlate(x, k, {Boundary::Periodic, stride}));
    return out;
}

std::vector<int> excluded_packets(const PacketBank& bank) {
    const auto lp = bank.lowpass_indices();
    const int half = bank.halfplane_count();
    return {lp[0], lp[1], lp[0] + half, lp[1] + half};
}

namespace {

FeatureMap block_input(const MultiChannelMap& X, const TwinConfig& cfg) {
    if (X.channels() == 1) return X[0];
    if (X.channels() == 3) return luminance(X, cfg.mu);
    throw std::invalid_argument("wavelet block: input must have 1 or 3 channels");
}

void check_block(const TwinConfig& cfg, const PacketBank& bank) {
    cfg.validate();
    if (bank.depth != cfg.J)
        throw std::invalid_argument("wavelet block: bank depth " + std::to_string(bank.depth) +
                                    " does not match J = " + std::to_string(cfg.J));
}

}  // namespace

MultiChannelMap wblock_forward(const MultiChannelMap& X, const TwinConfig& cfg, const PacketBank& bank,
                               const std::vector<MixingMatrix>& A) {
    check_block(cfg, bank);
    const auto D = dt_features(block_input(X, cfg), bank);
    const auto Dsel = select_permute(D, cfg.selected_packets(), excluded_packets(bank));
    return group_mix(Dsel, cfg.group_sizes(), A);
}

MultiChannelMap cwblock_forward(const MultiChannelMap& X, const TwinConfig& cfg, const PacketBank& bank,
                                const std::vector<MixingMatrix>& A) {
    check_block(cfg, bank);
    const auto D = dt_features_complex(block_input(X, cfg), bank);
    const auto Dsel = select_permute(D, cfg.selected_packets(), excluded_packets(bank));
    MultiChannelMap out;
    for (const auto& z : group_mix(Dsel, cfg.group_sizes(), A)) out.push_back(modulus(z));
    return out;
}

// ---------------------------------------------------------------- BN0 and propositions

FeatureMap bn0(const FeatureMap& u, double b, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("bn0: eps must be > 0");
    if (u.empty()) return u;
    double second = 0.0;
    for (double v : u.data()) second += v * v;
    second /= static_cast<double>(u.size());
    const double scale = 1.0 / std::sqrt(0.5 * second + eps);
    FeatureMap out = u;
    for (auto& v : out.data()) v = std::max(v * scale + b, 0.0);
    return out;
}

PropCheck verify_prop1(const ComplexMap& w, const FeatureMap& x, int m, Boundary boundary) {
    if (m < 1) throw std::invalid_argument("verify_prop1: m must be >= 1");
    const FeatureMap re = real_part(w);
    const FeatureMap y = cross_correlate(x, re, {boundary, m});
    double sum = 0.0;
    double l1 = 0.0;
    for (double v : y.data()) {
        sum += v;
        l1 += std::abs(v);
    }
    if (l1 == 0.0) return {0.0, true};
    return {std::abs(sum) / l1, false};
}

PropCheck verify_prop2(const ComplexMap& w, const FeatureMap& x, int m, Boundary boundary) {
    if (m < 1) throw std::invalid_argument("verify_prop2: m must be >= 1");
    const FeatureMap re = real_part(w);
    const FeatureMap y = cross_correlate(x, re, {boundary, m});
    const ComplexMap z = cross_correlate(x, w, {boundary, 2 * m});
    double ey = 0.0;
    double eu = 0.0;
    for (double v : y.data()) ey += v * v;
    for (const cplx& v : z.data()) eu += std::norm(v);
    if (eu == 0.0) return {1.0, true};
    return {ey / (2.0 * eu), false};
}

ComplexMap synthetic_bandlimited_kernel(int size, int m, int cell_x, int cell_y, std::uint64_t seed) {
    if (size < 8 || m < 1) throw std::invalid_argument("synthetic_bandlimited_kernel: bad size or m");
    const double pi = std::numbers::pi;
    const double width = pi / m;
    auto inside = [&](double w, int cell) {
        // strictly inside with one bin of margin on each side
        const double margin = 2.0 * pi / size;
        return w > cell * width + margin && w < (cell + 1) * width - margin;
    };
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    ComplexMap spec(size, size);
    int used = 0;
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) {
            const double wy = fft::bin_frequency(r, size);
            const double wx = fft::bin_frequency(c, size);
            if (inside(wx, cell_x) && inside(wy, cell_y)) {
                spec(r, c) = cplx(gauss(rng), gauss(rng));
                ++used;
            }
        }
    if (used == 0) throw std::invalid_argument("synthetic_bandlimited_kernel: grid too coarse for the cell");
    ComplexMap k = fft::shift_center(fft::inverse(spec));
    const double norm = l2_norm(k);
    for (auto& v : k.data()) v /= norm;
    k.set_origin({size / 2, size / 2});
    return k;
}

}  // namespace wavetwin

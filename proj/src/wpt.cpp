#include "wavetwin/wpt.hpp"

#include <stdexcept>
#include <string>

namespace wavetwin {
namespace {

int wrap(int i, int n) {
    const int r = i % n;
    return r < 0 ? r + n : r;
}

enum class Axis { X, Y };

// Two-channel analysis along one axis with periodic extension.
std::pair<FeatureMap, FeatureMap> analyze(const FeatureMap& in, Axis axis, const StageBank& bank,
                                          int step) {
    const auto& lo = *bank.lo;
    const auto& hi = *bank.hi;
    const int len = static_cast<int>(lo.size());
    if (axis == Axis::X) {
        const int n = in.cols();
        const int m = n / step;
        FeatureMap a(in.rows(), m), d(in.rows(), m);
        for (int r = 0; r < in.rows(); ++r)
            for (int i = 0; i < m; ++i) {
                double sa = 0.0, sd = 0.0;
                for (int k = 0; k < len; ++k) {
                    const double v = in(r, wrap(step * i + bank.start + k, n));
                    sa += v * lo[k];
                    sd += v * hi[k];
                }
                a(r, i) = sa;
                d(r, i) = sd;
            }
        return {std::move(a), std::move(d)};
    }
    const int n = in.rows();
    const int m = n / step;
    FeatureMap a(m, in.cols()), d(m, in.cols());
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < len; ++k) {
            const int src = wrap(step * i + bank.start + k, n);
            for (int c = 0; c < in.cols(); ++c) {
                const double v = in(src, c);
                a(i, c) += v * lo[k];
                d(i, c) += v * hi[k];
            }
        }
    return {std::move(a), std::move(d)};
}

// Adjoint of analyze(); undecimated stages are halved so the pair is an exact inverse.
FeatureMap synthesize(const FeatureMap& a, const FeatureMap& d, Axis axis, const StageBank& bank,
                      int step, int out_len) {
    const auto& lo = *bank.lo;
    const auto& hi = *bank.hi;
    const int len = static_cast<int>(lo.size());
    const double scale = step == 1 ? 0.5 : 1.0;
    if (axis == Axis::X) {
        FeatureMap out(a.rows(), out_len);
        for (int r = 0; r < a.rows(); ++r)
            for (int i = 0; i < a.cols(); ++i) {
                const double va = a(r, i) * scale, vd = d(r, i) * scale;
                for (int k = 0; k < len; ++k)
                    out(r, wrap(step * i + bank.start + k, out_len)) += va * lo[k] + vd * hi[k];
            }
        return out;
    }
    FeatureMap out(out_len, a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < len; ++k) {
            const int dst = wrap(step * i + bank.start + k, out_len);
            for (int c = 0; c < a.cols(); ++c)
                out(dst, c) += scale * (a(i, c) * lo[k] + d(i, c) * hi[k]);
        }
    return out;
}

void check_depth(int depth) {
    if (depth < 1 || depth > 8) throw std::invalid_argument("wpt: depth must be in [1, 8]");
}

}  // namespace

Tree tree_along_y(TreeCombo c) { return (c == TreeCombo::AA || c == TreeCombo::AB) ? Tree::A : Tree::B; }
Tree tree_along_x(TreeCombo c) { return (c == TreeCombo::AA || c == TreeCombo::BA) ? Tree::A : Tree::B; }

TreeCombo parse_tree_combo(std::string_view s) {
    if (s == "aa") return TreeCombo::AA;
    if (s == "ab") return TreeCombo::AB;
    if (s == "ba") return TreeCombo::BA;
    if (s == "bb") return TreeCombo::BB;
    throw std::invalid_argument("unknown tree combination '" + std::string(s) + "' (aa, ab, ba, bb)");
}

const char* to_string(TreeCombo c) {
    switch (c) {
        case TreeCombo::AA: return "aa";
        case TreeCombo::AB: return "ab";
        case TreeCombo::BA: return "ba";
        case TreeCombo::BB: return "bb";
    }
    return "?";
}

unsigned path_of_frequency_index(unsigned f) { return f ^ (f >> 1); }

unsigned frequency_index_of_path(unsigned path) {
    unsigned f = path;
    for (unsigned s = path >> 1; s != 0; s >>= 1) f ^= s;
    return f;
}

StageBank stage_bank(const FilterPair& pair, Tree tree, unsigned path, int stage) {
    if (stage == 0) {
        const auto& fs = pair.first_stage;
        return {&fs.analysis_lo, &fs.analysis_hi, tree == Tree::B ? pair.delay_offset : 0};
    }
    // Bits of stages 1..stage-1 are the low (stage - 1) bits of the path.
    const unsigned later_bits = path & ((1u << (stage - 1)) - 1u);
    const bool shared = later_bits != 0;
    if (tree == Tree::A || shared) return {&pair.qshift.analysis_lo, &pair.qshift.analysis_hi, 0};
    // The time-reversed Q-shift bank is the synthesis bank of tree a.
    return {&pair.qshift.synthesis_lo, &pair.qshift.synthesis_hi, 0};
}

std::vector<EquivalentFilter> equivalent_filters_1d(const FilterPair& pair, Tree tree, int depth) {
    check_depth(depth);
    // nodes indexed by path at the current depth
    std::vector<EquivalentFilter> nodes{EquivalentFilter{{1.0}, 0}};
    for (int s = 0; s < depth; ++s) {
        std::vector<EquivalentFilter> next(nodes.size() * 2);
        const int dil = 1 << s;
        for (unsigned p = 0; p < nodes.size(); ++p) {
            const StageBank bank = stage_bank(pair, tree, p, s);
            const auto& prev = nodes[p];
            for (int bit = 0; bit < 2; ++bit) {
                const auto& g = bit == 0 ? *bank.lo : *bank.hi;
                EquivalentFilter e;
                e.start = prev.start + dil * bank.start;
                e.taps.assign(prev.taps.size() + dil * (g.size() - 1), 0.0);
                for (std::size_t j = 0; j < g.size(); ++j)
                    for (std::size_t k = 0; k < prev.taps.size(); ++k)
                        e.taps[dil * j + k] += g[j] * prev.taps[k];
                next[(p << 1) | bit] = std::move(e);
            }
        }
        nodes = std::move(next);
    }
    std::vector<EquivalentFilter> ordered(nodes.size());
    for (unsigned f = 0; f < nodes.size(); ++f) ordered[f] = nodes[path_of_frequency_index(f)];
    return ordered;
}

std::vector<FeatureMap> wpt_forward(const FeatureMap& x, const FilterPair& pair, TreeCombo combo,
                                    int depth, bool last_stage_undecimated) {
    check_depth(depth);
    const int block = 1 << depth;
    if (x.rows() % block != 0 || x.cols() % block != 0)
        throw std::invalid_argument("wpt_forward: " + std::to_string(x.rows()) + "x" +
                                    std::to_string(x.cols()) + " is not divisible by 2^J = " +
                                    std::to_string(block));
    const Tree ty = tree_along_y(combo);
    const Tree tx = tree_along_x(combo);

    // nodes[ypath * width + xpath], width = 2^s
    std::vector<FeatureMap> nodes{x};
    for (int s = 0; s < depth; ++s) {
        const int width = 1 << s;
        const int step = (last_stage_undecimated && s == depth - 1) ? 1 : 2;
        std::vector<FeatureMap> next(nodes.size() * 4);
        for (unsigned yp = 0; yp < static_cast<unsigned>(width); ++yp)
            for (unsigned xp = 0; xp < static_cast<unsigned>(width); ++xp) {
                const auto& node = nodes[yp * width + xp];
                auto [xl, xh] = analyze(node, Axis::X, stage_bank(pair, tx, xp, s), step);
                const StageBank yb = stage_bank(pair, ty, yp, s);
                auto [ll, hl] = analyze(xl, Axis::Y, yb, step);
                auto [lh, hh] = analyze(xh, Axis::Y, yb, step);
                const int cw = width * 2;
                next[((yp << 1) | 0) * cw + ((xp << 1) | 0)] = std::move(ll);
                next[((yp << 1) | 0) * cw + ((xp << 1) | 1)] = std::move(lh);
                next[((yp << 1) | 1) * cw + ((xp << 1) | 0)] = std::move(hl);
                next[((yp << 1) | 1) * cw + ((xp << 1) | 1)] = std::move(hh);
            }
        nodes = std::move(next);
    }
    std::vector<FeatureMap> packets(nodes.size());
    for (unsigned fy = 0; fy < static_cast<unsigned>(block); ++fy)
        for (unsigned fx = 0; fx < static_cast<unsigned>(block); ++fx)
            packets[fy * block + fx] =
                std::move(nodes[path_of_frequency_index(fy) * block + path_of_frequency_index(fx)]);
    return packets;
}

FeatureMap wpt_inverse(const std::vector<FeatureMap>& packets, const FilterPair& pair,
                       TreeCombo combo, int depth, bool last_stage_undecimated) {
    check_depth(depth);
    const int block = 1 << depth;
    if (packets.size() != static_cast<std::size_t>(block) * block)
        throw std::invalid_argument("wpt_inverse: expected " + std::to_string(block * block) +
                                    " packets, got " + std::to_string(packets.size()));
    for (const auto& p : packets)
        if (!p.same_shape(packets.front()) || p.empty())
            throw std::invalid_argument("wpt_inverse: packets must share one nonempty shape");
    const Tree ty = tree_along_y(combo);
    const Tree tx = tree_along_x(combo);

    std::vector<FeatureMap> nodes(packets.size());
    for (unsigned fy = 0; fy < static_cast<unsigned>(block); ++fy)
        for (unsigned fx = 0; fx < static_cast<unsigned>(block); ++fx)
            nodes[path_of_frequency_index(fy) * block + path_of_frequency_index(fx)] =
                packets[fy * block + fx];

    int rows = packets.front().rows();
    int cols = packets.front().cols();
    for (int s = depth - 1; s >= 0; --s) {
        const int width = 1 << s;
        const int cw = width * 2;
        const int step = (last_stage_undecimated && s == depth - 1) ? 1 : 2;
        rows *= step;
        cols *= step;
        std::vector<FeatureMap> prev(static_cast<std::size_t>(width) * width);
        for (unsigned yp = 0; yp < static_cast<unsigned>(width); ++yp)
            for (unsigned xp = 0; xp < static_cast<unsigned>(width); ++xp) {
                auto child = [&](unsigned yb, unsigned xb) -> const FeatureMap& {
                    return nodes[((yp << 1) | yb) * cw + ((xp << 1) | xb)];
                };
                const StageBank ybank = stage_bank(pair, ty, yp, s);
                FeatureMap xl = synthesize(child(0, 0), child(1, 0), Axis::Y, ybank, step, rows);
                FeatureMap xh = synthesize(child(0, 1), child(1, 1), Axis::Y, ybank, step, rows);
                prev[yp * width + xp] =
                    synthesize(xl, xh, Axis::X, stage_bank(pair, tx, xp, s), step, cols);
            }
        nodes = std::move(prev);
    }
    return std::move(nodes.front());
}

}  // namespace wavetwin

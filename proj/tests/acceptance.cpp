// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wavetwin/costmodel.hpp"
#include "wavetwin/image_io.hpp"
#include "wavetwin/metrics.hpp"
#include "wavetwin/packet_bank.hpp"
#include "wavetwin/probes.hpp"
#include "wavetwin/spectral.hpp"
#include "wavetwin/twinblock.hpp"
#include "wavetwin/wpt.hpp"

using namespace wavetwin;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    failures += !pass;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

const FilterPair& filters() {
    static const FilterPair p = load_filter_pair("qshift10");
    return p;
}

std::vector<std::pair<std::string, FeatureMap>> test_images() {
    std::vector<std::pair<std::string, FeatureMap>> out;
    const fs::path dir = fs::path(WAVETWIN_SOURCE_DIR) / "data" / "images";
    std::vector<fs::path> paths;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".png") paths.push_back(e.path());
    std::sort(paths.begin(), paths.end());
    for (const auto& p : paths) {
        const MultiChannelMap img = read_image(p.string());
        out.emplace_back(p.stem().string(),
                         img.channels() == 3 ? luminance(img, {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}) : img[0]);
    }
    return out;
}

void perfect_reconstruction() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (int J = 1; J <= 3; ++J)
        for (TreeCombo c : {TreeCombo::AA, TreeCombo::AB, TreeCombo::BA, TreeCombo::BB})
            for (bool undecimated : {false, true}) {
                const FeatureMap x = oracle::random_map(64, 64, 100 + static_cast<std::uint64_t>(J));
                const auto packets = wpt_forward(x, filters(), c, J, undecimated);
                worst = std::max(worst, max_abs_diff(wpt_inverse(packets, filters(), c, J, undecimated), x));
            }
    const double t = seconds_since(t0);
    report(1, worst < 1e-8 && t < 5.0, fmt("max abs error %.3g over 4 combos x J=1..3 (limit 1e-8), %.2f s (limit 5 s)", worst, t));
}

void analyticity() {
    double worst = 1.0;
    int below = 0, total = 0;
    std::string worst_at;
    for (int J : {2, 3}) {
        const PacketBank b = build_packet_bank(filters(), J);
        for (const auto& d : diagnose_bank(b, 256)) {
            const auto& cell = b.cells[static_cast<std::size_t>(d.index)];
            std::printf("  J=%d kernel %3d (sigma %+d, fy %d, fx %d, %s): positive fraction %.4f\n", J, d.index,
                        cell.sigma, cell.fy, cell.fx, to_string(cell.kind), d.positive_fraction);
            ++total;
            below += d.positive_fraction < 0.9;
            if (d.positive_fraction < worst) {
                worst = d.positive_fraction;
                worst_at = fmt("J=%d kernel %d (fx=%d)", J, d.index, cell.fx);
            }
        }
    }
    report(2, below == 0,
           fmt("%d of %d half-plane kernels below 0.90; minimum %.4f at %s", below, total, worst, worst_at.c_str()));
}

struct PropSummary {
    double p1_images = 0.0;
    double p2_lo = INFINITY, p2_hi = -INFINITY;
    double p1_synth = 0.0;
    double s2_lo = INFINITY, s2_hi = -INFINITY;
    int image_cases = 0, synth_cases = 0;
};

PropSummary propositions() {
    PropSummary s;
    const auto images = test_images();
    // J=2 band-pass kernels on the photographs
    {
        const PacketBank b = build_packet_bank(filters(), 2);
        const int m = 2;
        for (const auto& [name, x] : images)
            for (int k = 0; k < b.halfplane_count(); ++k) {
                if (b.cells[static_cast<std::size_t>(k)].kind != PacketClass::Bandpass) continue;
                const auto& w = b.kernels[static_cast<std::size_t>(k)];
                const double p1 = verify_prop1(w, x, m, Boundary::Symmetric).value;
                const double p2 = verify_prop2(w, x, m, Boundary::Symmetric).value;
                s.p1_images = std::max(s.p1_images, p1);
                s.p2_lo = std::min(s.p2_lo, p2);
                s.p2_hi = std::max(s.p2_hi, p2);
                ++s.image_cases;
            }
    }
    // J=3 reported only
    {
        const PacketBank b = build_packet_bank(filters(), 3);
        double p1 = 0.0, lo = INFINITY, hi = -INFINITY;
        for (const auto& [name, x] : images)
            for (int k = 0; k < b.halfplane_count(); ++k) {
                if (b.cells[static_cast<std::size_t>(k)].kind != PacketClass::Bandpass) continue;
                const auto& w = b.kernels[static_cast<std::size_t>(k)];
                p1 = std::max(p1, verify_prop1(w, x, 4, Boundary::Symmetric).value);
                const double p2 = verify_prop2(w, x, 4, Boundary::Symmetric).value;
                lo = std::min(lo, p2);
                hi = std::max(hi, p2);
            }
        std::printf("  J=3 band-pass kernels on images (reported): prop1 max %.3g, prop2 in [%.4f, %.4f]\n", p1, lo, hi);
    }
    // kernels band-limited to one cell by construction
    for (int m : {1, 2, 4}) {
        std::uint64_t seed = 1;
        for (int cy = -m; cy < m; ++cy)
            for (int cx = 0; cx < m; ++cx, ++seed) {
                const ComplexMap w = synthetic_bandlimited_kernel(64, m, cx, cy, 7919 * static_cast<std::uint64_t>(m) + seed);
                for (std::uint64_t img = 0; img < 2; ++img) {
                    const FeatureMap x = img == 0 ? natural_like_image(64, seed) : oracle::random_map(64, 64, seed);
                    const double p1 = verify_prop1(w, x, m).value;
                    const double p2 = verify_prop2(w, x, m).value;
                    s.p1_synth = std::max(s.p1_synth, p1);
                    s.s2_lo = std::min(s.s2_lo, p2);
                    s.s2_hi = std::max(s.s2_hi, p2);
                    ++s.synth_cases;
                }
            }
    }
    return s;
}

void shift_stability() {
    const auto t0 = Clock::now();
    bool pass = true;
    std::string detail;
    for (int J : {2, 3}) {
        const PacketBank b = build_packet_bank(filters(), J);
        StabilityOptions opt;
        opt.probes = 20;
        opt.seed = 1;
        const auto r = shift_stability_sweep(b, opt);
        const double wins = r.cmod_wins();
        pass = pass && wins >= 0.95 && r.max_cmod_at_period < 1e-6;
        detail += fmt("J=%d: cmod<=rmax in %.4f of %zu cases, cmod at %d px %.2g; ", J, wins, r.cases.size(), 2 * r.m,
                      r.max_cmod_at_period);
    }
    const double t = seconds_since(t0);
    pass = pass && t < 120.0;
    report(5, pass, detail + fmt("%.1f s (limit 120 s)", t));
}

void table4() {
    const auto t0 = Clock::now();
    bool pass = true;
    std::string detail;
    for (const auto& c : cost::check_table4(cost::table4())) {
        pass = pass && c.flops_ok && c.mem_ok;
        detail += fmt("%s/%s %.3f,%.3f; ", cost::to_string(c.row.arch), cost::to_string(c.row.method),
                      c.row.flops_ratio, c.row.mem_ratio);
    }
    const double t = seconds_since(t0);
    report(6, pass && t < 1.0, detail + fmt("%.4f s", t));
}

void regularizer() {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> g;
    std::uniform_int_distribution<int> dim(1, 6);
    int zero_ok = 0, zero_total = 0;
    double worst_rel = 0.0;
    int grads = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int rows = dim(rng), cols = dim(rng);
        // one-hot rows: penalty exactly zero
        MixingMatrix hot(rows, cols);
        for (int l = 0; l < rows; ++l) hot(l, std::uniform_int_distribution<int>(0, cols - 1)(rng)) = g(rng) + 3.0;
        ++zero_total;
        zero_ok += sparsity_penalty({hot}, {0.7}) == 0.0;
        // a row with two nonzeros: strictly positive
        if (cols >= 2) {
            MixingMatrix two = hot;
            const int l = std::uniform_int_distribution<int>(0, rows - 1)(rng);
            for (int j = 0; j < cols; ++j) two(l, j) = 0.0;
            two(l, 0) = 1.0;
            two(l, cols - 1) = -0.25;
            ++zero_total;
            zero_ok += sparsity_penalty({two}, {0.7}) > 0.0;
        }
        // dense random rows: finite differences vs subgradient
        MixingMatrix a(rows, cols);
        for (auto& v : a.a) v = g(rng);
        const std::vector<MixingMatrix> A{a};
        const std::vector<double> lam{0.3};
        const auto G = sparsity_subgradient(A, lam);
        for (std::size_t i = 0; i < a.a.size(); ++i) {
            const double h = 1e-6 * std::max(1.0, std::abs(a.a[i]));
            auto P = A, M = A;
            P[0].a[i] += h;
            M[0].a[i] -= h;
            const double fd = (sparsity_penalty(P, lam) - sparsity_penalty(M, lam)) / (2.0 * h);
            const double scale = std::max(std::abs(fd), std::abs(G[0].a[i]));
            if (scale > 1e-8) worst_rel = std::max(worst_rel, std::abs(fd - G[0].a[i]) / scale);
            ++grads;
        }
    }
    report(7, zero_ok == zero_total && worst_rel <= 1e-5,
           fmt("zero-iff-one-hot %d/%d; gradient max relative error %.2g over %d entries (limit 1e-5)", zero_ok,
               zero_total, worst_rel, grads));
}

void metric_suite() {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> len(1, 12);
    int kl_ok = 0, kl_total = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = len(rng);
        std::vector<double> p(static_cast<std::size_t>(n)), q(static_cast<std::size_t>(n));
        double sp = 0.0, sq = 0.0;
        for (int i = 0; i < n; ++i) {
            p[i] = trial % 5 == 0 && i % 3 == 0 ? 0.0 : u(rng);
            q[i] = u(rng) + 1e-3;
            sp += p[i];
            sq += q[i];
        }
        if (sp == 0.0) p[0] = sp = 1.0;
        for (auto& v : p) v /= sp;
        for (auto& v : q) v /= sq;
        // closed form, same summation order
        double want = 0.0;
        for (int i = 0; i < n; ++i)
            if (p[i] > 0.0) want += p[i] * std::log(p[i] / q[i]);
        ++kl_total;
        kl_ok += kl_divergence(p, q) == want;
        ++kl_total;
        kl_ok += kl_divergence(p, p) == 0.0;
    }
    int mfr_ok = 0, mfr_total = 0;
    std::uniform_int_distribution<int> label(0, 3), count(1, 6);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::vector<int>> seqs(static_cast<std::size_t>(count(rng)));
        const int shifts = count(rng);
        long flips = 0, total = 0;
        for (auto& s : seqs) {
            s.push_back(label(rng));
            for (int k = 0; k < shifts; ++k) {
                s.push_back(label(rng));
                flips += s.back() != s.front();
                ++total;
            }
        }
        const double baseline = 0.25 * (1 + trial % 4);
        ++mfr_total;
        mfr_ok += mean_flip_rate(seqs, baseline) == static_cast<double>(flips) / static_cast<double>(total) / baseline;
    }
    report(8, kl_ok == kl_total && mfr_ok == mfr_total && kl_total >= 100 && mfr_total >= 100,
           fmt("kl_divergence %d/%d, mean_flip_rate %d/%d exact matches", kl_ok, kl_total, mfr_ok, mfr_total));
}

}  // namespace

int main() {
    const auto t0 = Clock::now();
    perfect_reconstruction();
    analyticity();
    const PropSummary s = propositions();
    report(3, s.p1_images <= 1e-2 && s.p1_synth <= 1e-10,
           fmt("band-pass kernels on %d image cases: max residual %.3g (limit 1e-2); synthetic kernels on %d cases: "
               "max %.3g (limit 1e-10)",
               s.image_cases, s.p1_images, s.synth_cases, s.p1_synth));
    report(4, s.p2_lo >= 0.95 && s.p2_hi <= 1.05 && s.s2_lo >= 0.999 && s.s2_hi <= 1.001,
           fmt("band-pass kernels on images: ratio in [%.4f, %.4f] (limit [0.95, 1.05]); synthetic: [%.6f, %.6f] "
               "(limit [0.999, 1.001])",
               s.p2_lo, s.p2_hi, s.s2_lo, s.s2_hi));
    shift_stability();
    table4();
    regularizer();
    metric_suite();
    std::printf("%d criteria failed, total %.1f s\n", failures, seconds_since(t0));
    return failures == 0 ? 0 : 1;
}

#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>

#include "wavetwin/costmodel.hpp"
#include "wavetwin/csv.hpp"
#include "wavetwin/filters.hpp"
#include "wavetwin/image_io.hpp"
#include "wavetwin/metrics.hpp"
#include "wavetwin/packet_bank.hpp"
#include "wavetwin/probes.hpp"
#include "wavetwin/spectral.hpp"
#include "wavetwin/twinblock.hpp"
#include "wavetwin/wpt.hpp"

#ifndef WAVETWIN_DATA_DIR
#define WAVETWIN_DATA_DIR "data"
#endif

namespace wavetwin::cli {

namespace fs = std::filesystem;

Tolerances::Tolerances()
    : values_{{"recon", 1e-8},        {"prop1", 1e-2},      {"prop2", 0.05},       {"synth_prop1", 1e-10},
              {"synth_prop2", 1e-3},  {"shift_win", 0.95},  {"covariance", 1e-6}} {}

void Tolerances::apply(const std::vector<std::string>& overrides) {
    for (const auto& item : overrides) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw UsageError("--tol expects NAME=VAL, got '" + item + "'");
        const std::string name = item.substr(0, eq);
        const auto it = values_.find(name);
        if (it == values_.end()) {
            std::string known;
            for (const auto& [k, v] : values_) known += (known.empty() ? "" : ", ") + k;
            throw UsageError("unknown tolerance '" + name + "' (known: " + known + ")");
        }
        const std::string text = item.substr(eq + 1);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(text, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != text.size() || !std::isfinite(v) || v < 0.0)
            throw UsageError("bad value for tolerance '" + name + "': '" + text + "'");
        it->second = v;
    }
}

double Tolerances::get(const std::string& name) const { return values_.at(name); }

std::string default_image_dir() { return std::string(WAVETWIN_DATA_DIR) + "/images"; }

namespace {

struct Setup {
    bool has_config = false;
    TwinConfig cfg;
    int depth = 2;
    int m = 2;
    PacketBank bank;
};

Setup load_setup(const RunManifest& run) {
    Setup s;
    std::string filters = "qshift10";
    if (!run.config_path.empty()) {
        try {
            s.cfg = load_twin_config(run.config_path);
        } catch (const std::exception& e) {
            throw UsageError(e.what());
        }
        s.has_config = true;
        s.depth = s.cfg.J;
        filters = s.cfg.filters;
    }
    if (run.depth != 0) {
        if (run.depth < 1 || run.depth > 3)
            throw UsageError("invalid J=" + std::to_string(run.depth) + " (supported: 1, 2, 3)");
        if (s.has_config && run.depth != s.cfg.J)
            throw UsageError("--J " + std::to_string(run.depth) + " contradicts the config (J=" +
                             std::to_string(s.cfg.J) + ")");
        s.depth = run.depth;
    }
    s.m = 1 << (s.depth - 1);
    try {
        s.bank = build_packet_bank(load_filter_pair(filters), s.depth);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return s;
}

std::array<double, 3> mixing_weights(const Setup& s) {
    return s.has_config ? s.cfg.mu : std::array<double, 3>{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
}

FeatureMap load_gray(const std::string& path, const std::array<double, 3>& mu) {
    if (!fs::exists(path)) throw UsageError("no such image: '" + path + "'");
    MultiChannelMap img;
    try {
        img = read_image(path);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    return img.channels() == 3 ? luminance(img, mu) : img[0];
}

std::vector<std::string> image_list(const RunManifest& run, bool use_default) {
    if (!run.inputs.empty() || !use_default) return run.inputs;
    std::vector<std::string> out;
    const fs::path dir = default_image_dir();
    if (fs::is_directory(dir))
        for (const auto& e : fs::directory_iterator(dir))
            if (e.path().extension() == ".png" || e.path().extension() == ".pgm") out.push_back(e.path().string());
    std::sort(out.begin(), out.end());
    if (out.empty()) throw UsageError("no input images given and none found in " + dir.string());
    return out;
}

void require_out_dir(const RunManifest& run) {
    if (run.out_dir.empty()) throw UsageError(run.subcommand + " writes image files; pass --out DIR");
    std::error_code ec;
    fs::create_directories(run.out_dir, ec);
    if (ec || !fs::is_directory(run.out_dir)) throw UsageError("cannot create output directory '" + run.out_dir + "'");
}

/// CSV goes to DIR/name with --out, otherwise to stdout.
void emit(const RunManifest& run, const std::string& name, const std::string& text, std::ostream& out) {
    if (run.out_dir.empty()) {
        out << text;
        return;
    }
    std::error_code ec;
    fs::create_directories(run.out_dir, ec);
    const fs::path path = fs::path(run.out_dir) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + path.string() + "'");
    f << text;
}

std::string numbered(const char* prefix, int i, const char* ext) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%03d%s", prefix, i, ext);
    return buf;
}

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

FeatureMap crop_to_multiple(const FeatureMap& x, int q) {
    const int rows = x.rows() / q * q;
    const int cols = x.cols() / q * q;
    if (rows == 0 || cols == 0) throw UsageError("image smaller than " + std::to_string(q) + " pixels");
    return crop(x, 0, 0, rows, cols);
}

const char* class_name(const PacketBank& bank, int k) {
    return to_string(bank.cells[static_cast<std::size_t>(k)].kind);
}

}  // namespace

// ------------------------------------------------------------------ filters

int cmd_filters(const RunManifest& run, std::ostream& out, std::ostream& log) {
    const Setup s = load_setup(run);
    require_out_dir(run);
    const fs::path dir = run.out_dir;
    CsvTable table({"index", "sigma", "fy", "fx", "conjugate", "class", "centroid_x", "centroid_y",
                    "positive_fraction", "norm_balance"});
    for (int i = 0; i < s.bank.size(); ++i) {
        const ComplexMap& k = s.bank.kernels[static_cast<std::size_t>(i)];
        const auto& cell = s.bank.cells[static_cast<std::size_t>(i)];
        // real part | gap | imaginary part, one shared symmetric scale
        FeatureMap panel(k.rows(), 2 * k.cols() + 2);
        for (int r = 0; r < k.rows(); ++r)
            for (int c = 0; c < k.cols(); ++c) {
                panel(r, c) = k(r, c).real();
                panel(r, c + k.cols() + 2) = k(r, c).imag();
            }
        write_png_signed((dir / numbered("kernel", i, ".png")).string(), panel);
        write_png_unsigned((dir / numbered("spectrum", i, ".png")).string(), kernel_spectrum(k, 64));
        const double re = l2_norm(real_part(k));
        const double im = l2_norm(imag_part(k));
        table.add_row({std::to_string(i), std::to_string(cell.sigma), std::to_string(cell.fy), std::to_string(cell.fx),
                       cell.conjugate ? "1" : "0", to_string(cell.kind),
                       csv_number(s.bank.cell_centers[static_cast<std::size_t>(i)][0]),
                       csv_number(s.bank.cell_centers[static_cast<std::size_t>(i)][1]),
                       csv_number(positive_xi1_fraction(k)), csv_number(im > 0.0 ? re / im : 0.0)});
    }
    emit(run, "filters.csv", table.str(), out);
    std::ofstream coef(dir / "coefficients.txt", std::ios::binary);
    coef << format_coefficients(builtin_coefficients());
    log << "wrote " << s.bank.size() << " kernels (J=" << s.depth << ") to " << run.out_dir << "\n";
    return kOk;
}

// ---------------------------------------------------------------- decompose

int cmd_decompose(const RunManifest& run, std::ostream& out, std::ostream& log) {
    const Setup s = load_setup(run);
    if (run.inputs.empty()) throw UsageError("decompose needs at least one input image");
    require_out_dir(run);
    CsvTable table({"image", "packet", "sigma", "fy", "fx", "class", "energy"});
    for (const auto& path : run.inputs) {
        const FeatureMap x = crop_to_multiple(load_gray(path, mixing_weights(s)), 1 << s.depth);
        const MultiChannelComplex D = dt_features_complex(x, s.bank);
        const std::string stem = stem_of(path);
        for (int k = 0; k < s.bank.halfplane_count(); ++k) {
            const FeatureMap u = modulus(D[k]);
            write_png_unsigned((fs::path(run.out_dir) / numbered((stem + "_packet").c_str(), k, ".png")).string(), u);
            double e = 0.0;
            for (double v : u.data()) e += v * v;
            const auto& cell = s.bank.cells[static_cast<std::size_t>(k)];
            table.add_row({stem, std::to_string(k), std::to_string(cell.sigma), std::to_string(cell.fy),
                           std::to_string(cell.fx), class_name(s.bank, k), csv_number(e)});
        }
        log << stem << ": " << s.bank.halfplane_count() << " packets of " << D.rows() << "x" << D.cols() << "\n";
    }
    emit(run, "decompose.csv", table.str(), out);
    return kOk;
}

// -------------------------------------------------------------- shift-bench

int cmd_shift_bench(const RunManifest& run, std::ostream& out, std::ostream& log) {
    const Setup s = load_setup(run);
    if (run.probes < 1) throw UsageError("--probes must be >= 1");
    std::vector<ShiftAxis> axes;
    try {
        for (const auto& a : run.axes) axes.push_back(parse_shift_axis(a));
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (axes.empty()) axes = {ShiftAxis::Horizontal, ShiftAxis::Vertical, ShiftAxis::Diagonal};
    try {
        binomial_row(run.blur_size);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    std::vector<int> kernels;
    if (s.has_config) {
        kernels = s.cfg.selected_packets();
    } else {
        for (int k = 0; k < s.bank.halfplane_count(); ++k)
            if (s.bank.cells[static_cast<std::size_t>(k)].kind == PacketClass::Bandpass) kernels.push_back(k);
    }
    if (kernels.empty()) throw UsageError("no band-pass kernels at J=" + std::to_string(s.depth));

    std::vector<double> shifts;
    for (int i = 0; i <= 16; ++i) shifts.push_back(0.5 * i);

    // Sources: the given images (symmetric boundary, interior comparison) or
    // periodic synthetic in-band probes, one set per kernel.
    const std::vector<std::string> images = image_list(run, false);
    const bool synthetic = images.empty();
    std::vector<FeatureMap> grays;
    for (const auto& p : images) grays.push_back(load_gray(p, mixing_weights(s)));
    const int probe_size = 16 << s.depth;

    const std::array<const char*, 3> names{"rmax", "cmod", "blur"};
    // sums[axis][op][shift]
    std::vector<std::array<std::vector<double>, 3>> sums(axes.size());
    for (auto& a : sums)
        for (auto& v : a) v.assign(shifts.size(), 0.0);
    long count = 0;

    for (int k : kernels) {
        const ComplexMap& w = s.bank.kernels[static_cast<std::size_t>(k)];
        const Boundary b = synthetic ? Boundary::Periodic : Boundary::Symmetric;
        const int border = synthetic ? 0 : std::max(w.rows(), w.cols()) / (2 * s.m) + 2;
        const std::array<ShiftOperator, 3> ops{make_rmax_operator(w, s.m, b, border),
                                               make_cmod_operator(w, s.m, b, border),
                                               make_blur_operator(w, s.m, run.blur_size, b, border)};
        std::vector<std::function<FeatureMap(double, double)>> sources;
        if (synthetic) {
            const auto box = in_band_box(s.bank.cells[static_cast<std::size_t>(k)], s.depth, 0.5);
            for (int p = 0; p < run.probes; ++p) {
                auto terms = bandlimited_probe(box.lo, box.hi, 3, run.seed * 1000003ULL + k * 1009ULL + p, probe_size);
                sources.emplace_back([terms, probe_size](double dy, double dx) {
                    return render(terms, probe_size, probe_size, dy, dx);
                });
            }
        } else {
            for (const auto& g : grays) {
                const int margin = 10;
                int size = std::min({128, g.rows() - 2 * margin, g.cols() - 2 * margin});
                size -= size % (2 * s.m);
                if (size < 8 * s.m) throw UsageError("image too small for shift-bench");
                const Index2 anchor{(g.rows() - size) / 2, (g.cols() - size) / 2};
                sources.emplace_back([&g, anchor, size](double dy, double dx) {
                    return shifted_patch(g, anchor, size, dy, dx);
                });
            }
        }
        for (std::size_t a = 0; a < axes.size(); ++a)
            for (const auto& src : sources)
                for (std::size_t o = 0; o < ops.size(); ++o) {
                    const auto rep = feature_consistency(ops[o], src, axes[a], shifts);
                    for (std::size_t i = 0; i < shifts.size(); ++i) sums[a][o][i] += rep.distances[i];
                }
        count += static_cast<long>(sources.size());
    }

    CsvTable table({"shift_px", "axis", "operator", "distance"});
    int rows = 0;
    int cmod_le_rmax = 0;
    double cov = 0.0;
    for (std::size_t a = 0; a < axes.size(); ++a) {
        for (std::size_t o = 0; o < names.size(); ++o)
            for (std::size_t i = 0; i < shifts.size(); ++i)
                table.add_row({csv_number(shifts[i]), to_string(axes[a]), names[o],
                               csv_number(sums[a][o][i] / static_cast<double>(count))});
        for (std::size_t i = 0; i < shifts.size(); ++i) {
            ++rows;
            cmod_le_rmax += sums[a][1][i] <= sums[a][0][i] + 1e-12 * static_cast<double>(count);
            if (shifts[i] == 2.0 * s.m) cov = std::max(cov, sums[a][1][i] / static_cast<double>(count));
        }
    }
    emit(run, "shift_bench.csv", table.str(), out);

    const double frac = static_cast<double>(cmod_le_rmax) / rows;
    log << "shift-bench: " << kernels.size() << " kernels, " << (synthetic ? "synthetic probes" : "images")
        << ", cmod <= rmax in " << cmod_le_rmax << "/" << rows << " rows (" << frac << ")";
    // The win-rate and covariance bounds apply to the periodic synthetic
    // probes; image runs are reported only.
    bool ok = true;
    if (synthetic) {
        log << ", cmod distance at " << 2 * s.m << " px: " << cov;
        ok = frac >= run.tol.get("shift_win") && cov < run.tol.get("covariance");
    }
    log << (ok ? "" : "  [FAIL]") << "\n";
    return ok ? kOk : kCheckFailed;
}

// ------------------------------------------------------------------- verify

int cmd_verify(const RunManifest& run, std::ostream& out, std::ostream& log) {
    const Setup s = load_setup(run);
    std::vector<int> bandpass;
    for (int k = 0; k < s.bank.halfplane_count(); ++k)
        if (s.bank.cells[static_cast<std::size_t>(k)].kind == PacketClass::Bandpass) bandpass.push_back(k);
    if (bandpass.empty())
        throw UsageError("no band-pass kernels to verify at J=" + std::to_string(s.depth) +
                         " (every non-lowpass packet touches the band edge)");

    const double t1 = run.tol.get("prop1");
    const double t2 = run.tol.get("prop2");
    const double s1 = run.tol.get("synth_prop1");
    const double s2 = run.tol.get("synth_prop2");

    CsvTable table({"source", "kernel", "sigma", "fy", "fx", "class", "prop1", "prop2", "asserted", "pass"});
    struct Summary {
        int n = 0;
        int failed = 0;
        double p1 = 0.0;
        double p2lo = INFINITY;
        double p2hi = -INFINITY;
    };
    std::map<std::string, Summary> summary;
    bool ok = true;
    auto record = [&](const std::string& source, int k, int sigma, int fy, int fx, const std::string& cls,
                      PropCheck p1, PropCheck p2, bool asserted, double tol1, double tol2) {
        const bool pass = p1.value <= tol1 && std::abs(p2.value - 1.0) <= tol2;
        if (asserted && !pass) ok = false;
        auto& sm = summary[cls];
        ++sm.n;
        sm.failed += asserted && !pass;
        sm.p1 = std::max(sm.p1, p1.value);
        sm.p2lo = std::min(sm.p2lo, p2.value);
        sm.p2hi = std::max(sm.p2hi, p2.value);
        table.add_row({source, std::to_string(k), std::to_string(sigma), std::to_string(fy), std::to_string(fx), cls,
                       csv_number(p1.value), csv_number(p2.value), asserted ? "1" : "0", pass ? "1" : "0"});
    };

    for (const auto& path : image_list(run, true)) {
        const FeatureMap x = load_gray(path, mixing_weights(s));
        for (int k = 0; k < s.bank.halfplane_count(); ++k) {
            const auto& cell = s.bank.cells[static_cast<std::size_t>(k)];
            const ComplexMap& w = s.bank.kernels[static_cast<std::size_t>(k)];
            record(stem_of(path), k, cell.sigma, cell.fy, cell.fx, to_string(cell.kind),
                   verify_prop1(w, x, s.m, Boundary::Symmetric), verify_prop2(w, x, s.m, Boundary::Symmetric),
                   cell.kind == PacketClass::Bandpass, t1, t2);
        }
    }

    // Kernels band-limited to one cell of side pi/m by construction.
    const int size = 64;
    const FeatureMap probe = natural_like_image(size, run.seed);
    int idx = 0;
    for (int cy = -s.m; cy < s.m; ++cy)
        for (int cx = 0; cx < s.m; ++cx, ++idx) {
            const ComplexMap w = synthetic_bandlimited_kernel(size, s.m, cx, cy, run.seed * 7919ULL + idx);
            record("synthetic", idx, cy >= 0 ? 1 : -1, cy, cx, "synthetic", verify_prop1(w, probe, s.m),
                   verify_prop2(w, probe, s.m), true, s1, s2);
        }

    emit(run, "verify.csv", table.str(), out);
    for (const auto& [cls, sm] : summary) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%-10s n=%-4d prop1 max %.3e  prop2 [%.4f, %.4f]  failed %d\n", cls.c_str(),
                      sm.n, sm.p1, sm.p2lo, sm.p2hi, sm.failed);
        log << buf;
    }
    log << (ok ? "verify: all asserted bounds hold\n" : "verify: asserted bound violated\n");
    return ok ? kOk : kCheckFailed;
}

// --------------------------------------------------------------------- cost

int cmd_cost(const RunManifest& run, std::ostream& out, std::ostream& log) {
    std::optional<cost::Arch> only;
    if (!run.arch.empty()) {
        try {
            only = cost::parse_arch(run.arch);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    const auto rows = cost::table4();
    const auto checks = cost::check_table4(rows);
    std::vector<cost::Table4Row> shown;
    for (const auto& r : rows)
        if (!only || r.arch == *only) shown.push_back(r);
    emit(run, "table4.csv", cost::table4_csv(shown), out);

    bool ok = true;
    for (const auto& c : checks) {
        if (only && c.row.arch != *only) continue;
        char buf[256];
        std::snprintf(buf, sizeof buf, "%-6s %-8s flops %.4f (%.1f +- %.2f) %s   mem %.4f (%.1f +- %.2f) %s\n",
                      cost::to_string(c.row.method), cost::to_string(c.row.arch), c.row.flops_ratio, c.target.flops,
                      c.target.flops_tol, c.flops_ok ? "ok" : "FAIL", c.row.mem_ratio, c.target.mem,
                      c.target.mem_tol, c.mem_ok ? "ok" : "FAIL");
        log << buf;
        ok = ok && c.flops_ok && c.mem_ok;
    }
    return ok ? kOk : kCheckFailed;
}

// ------------------------------------------------------------- recon-check

int cmd_recon_check(const RunManifest& run, std::ostream& out, std::ostream& log) {
    std::string filters = "qshift10";
    if (!run.config_path.empty()) filters = load_setup(run).cfg.filters;
    if (run.depth != 0 && (run.depth < 1 || run.depth > 3))
        throw UsageError("invalid J=" + std::to_string(run.depth) + " (supported: 1, 2, 3)");
    const FilterPair pair = load_filter_pair(filters);
    std::vector<int> depths = run.depth ? std::vector<int>{run.depth} : std::vector<int>{1, 2, 3};

    std::vector<std::pair<std::string, FeatureMap>> inputs;
    std::mt19937_64 rng(run.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    FeatureMap noise(64, 64);
    for (auto& v : noise.data()) v = unit(rng);
    inputs.emplace_back("random64", noise);
    for (const auto& p : run.inputs) inputs.emplace_back(stem_of(p), load_gray(p, {1.0 / 3, 1.0 / 3, 1.0 / 3}));

    const double tol = run.tol.get("recon");
    CsvTable table({"source", "J", "combo", "last_stage", "max_error"});
    double worst = 0.0;
    for (const auto& [name, img] : inputs)
        for (int J : depths) {
            const FeatureMap x = crop_to_multiple(img, 1 << J);
            for (TreeCombo c : {TreeCombo::AA, TreeCombo::AB, TreeCombo::BA, TreeCombo::BB})
                for (bool undecimated : {false, true}) {
                    const auto packets = wpt_forward(x, pair, c, J, undecimated);
                    const double err = max_abs_diff(wpt_inverse(packets, pair, c, J, undecimated), x);
                    worst = std::max(worst, err);
                    table.add_row({name, std::to_string(J), to_string(c), undecimated ? "undecimated" : "decimated",
                                   csv_number(err)});
                }
        }
    emit(run, "recon.csv", table.str(), out);
    const bool ok = worst < tol;
    log << "recon-check: worst max abs error " << worst << (ok ? " < " : " >= ") << tol << "\n";
    return ok ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------------- cli

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& log) {
    CLI::App app{"Complex wavelet antialiasing toolkit"};
    app.require_subcommand(1);
    RunManifest run;
    std::vector<std::string> tol;

    auto common = [&](CLI::App* sub, bool config) {
        if (config) sub->add_option("--config", run.config_path, "Twin configuration (JSON)");
        sub->add_option("--out", run.out_dir, "Output directory (CSV to stdout when omitted)");
        sub->add_option("--seed", run.seed, "Random seed")->capture_default_str();
        sub->add_option("--tol", tol, "Tolerance override NAME=VAL (repeatable)");
    };
    auto depth = [&](CLI::App* sub) { sub->add_option("--J", run.depth, "Decomposition depth (1-3)"); };

    auto* filters = app.add_subcommand("filters", "Export packet kernels as PNG and their diagnostics as CSV");
    common(filters, true);
    depth(filters);

    auto* decompose = app.add_subcommand("decompose", "Write packet moduli of input images");
    common(decompose, true);
    depth(decompose);
    decompose->add_option("images", run.inputs, "PNG/PGM inputs")->required();

    auto* bench = app.add_subcommand("shift-bench", "Feature consistency curves for rmax, cmod and blur");
    common(bench, true);
    depth(bench);
    bench->add_option("--image", run.inputs, "PNG/PGM inputs (synthetic in-band probes when omitted)");
    bench->add_option("--axis", run.axes, "horizontal, vertical or diagonal (repeatable; default all)");
    bench->add_option("--probes", run.probes, "Synthetic probes per kernel")->capture_default_str();
    bench->add_option("--blur-size", run.blur_size, "Binomial blur size")->capture_default_str();

    auto* verify = app.add_subcommand("verify", "Check the sum-to-zero and energy propositions on the packet bank");
    common(verify, true);
    depth(verify);
    verify->add_option("--image", run.inputs, "PNG/PGM inputs (bundled images when omitted)");

    auto* costcmd = app.add_subcommand("cost", "Computational cost and memory ratio table");
    common(costcmd, false);
    costcmd->add_option("--arch", run.arch, "alexnet or resnet (default both)");

    auto* recon = app.add_subcommand("recon-check", "Perfect-reconstruction check of the packet transforms");
    common(recon, true);
    depth(recon);
    recon->add_option("--image", run.inputs, "Additional PNG/PGM inputs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, log);
        return code == 0 ? kOk : kUsage;
    }

    try {
        run.tol.apply(tol);
        CLI::App* sub = app.get_subcommands().front();
        run.subcommand = sub->get_name();
        if (sub == filters) return cmd_filters(run, out, log);
        if (sub == decompose) return cmd_decompose(run, out, log);
        if (sub == bench) return cmd_shift_bench(run, out, log);
        if (sub == verify) return cmd_verify(run, out, log);
        if (sub == costcmd) return cmd_cost(run, out, log);
        return cmd_recon_check(run, out, log);
    } catch (const UsageError& e) {
        log << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return kUsage;
    }
}

}  // namespace wavetwin::cli

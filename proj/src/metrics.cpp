#include "wavetwin/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <thread>

#include "wavetwin/csv.hpp"
#include "wavetwin/probes.hpp"

namespace wavetwin {
namespace {

bool is_half_integer(double s) {
    const double twice = 2.0 * s;
    return std::abs(twice - std::round(twice)) < 1e-12;
}

// Nearest whole number of output samples; exact halves go toward zero.
int nearest_toward_zero(double v) {
    const double a = std::abs(v);
    const int n = static_cast<int>(std::ceil(a - 0.5 - 1e-12));
    return v < 0 ? -n : n;
}

double bilinear(const FeatureMap& img, double y, double x) {
    const int y0 = static_cast<int>(std::floor(y));
    const int x0 = static_cast<int>(std::floor(x));
    const double fy = y - y0;
    const double fx = x - x0;
    auto at = [&](int r, int c) {
        if (r < 0 || c < 0 || r >= img.rows() || c >= img.cols())
            throw std::invalid_argument("shifted patch leaves the image");
        return img(r, c);
    };
    double v = (1 - fy) * (1 - fx) * at(y0, x0);
    if (fx > 0) v += (1 - fy) * fx * at(y0, x0 + 1);
    if (fy > 0) v += fy * (1 - fx) * at(y0 + 1, x0);
    if (fx > 0 && fy > 0) v += fy * fx * at(y0 + 1, x0 + 1);
    return v;
}

FeatureMap max_filter3(const FeatureMap& y, Boundary boundary) {
    FeatureMap out(y.rows(), y.cols());
    for (int r = 0; r < y.rows(); ++r)
        for (int c = 0; c < y.cols(); ++c) {
            double best = -std::numeric_limits<double>::infinity();
            for (int a = -1; a <= 1; ++a)
                for (int b = -1; b <= 1; ++b) {
                    const int rr = r + a;
                    const int cc = c + b;
                    if (boundary != Boundary::Periodic && (rr < 0 || cc < 0 || rr >= y.rows() || cc >= y.cols()))
                        continue;
                    best = std::max(best, sample_extended(y, rr, cc, Boundary::Periodic));
                }
            out(r, c) = best;
        }
    return out;
}

}  // namespace

ShiftAxis parse_shift_axis(std::string_view s) {
    if (s == "horizontal") return ShiftAxis::Horizontal;
    if (s == "vertical") return ShiftAxis::Vertical;
    if (s == "diagonal") return ShiftAxis::Diagonal;
    throw std::invalid_argument("unknown shift axis '" + std::string(s) + "'");
}

const char* to_string(ShiftAxis a) {
    switch (a) {
        case ShiftAxis::Horizontal: return "horizontal";
        case ShiftAxis::Vertical: return "vertical";
        case ShiftAxis::Diagonal: return "diagonal";
    }
    return "?";
}

std::array<double, 2> shift_vector(ShiftAxis axis, double amount) {
    switch (axis) {
        case ShiftAxis::Horizontal: return {0.0, amount};
        case ShiftAxis::Vertical: return {amount, 0.0};
        case ShiftAxis::Diagonal: return {amount, amount};
    }
    return {0.0, 0.0};
}

FeatureMap shifted_patch(const FeatureMap& img, Index2 anchor, int size, double dy, double dx) {
    if (size <= 0) throw std::invalid_argument("shifted_patch: size must be positive");
    if (!is_half_integer(dy) || !is_half_integer(dx))
        throw std::invalid_argument("shifted_patch: shifts must be multiples of 0.5 px");
    const double y0 = anchor.row + dy;
    const double x0 = anchor.col + dx;
    if (y0 < 0 || x0 < 0 || y0 + size - 1 > img.rows() - 1 || x0 + size - 1 > img.cols() - 1)
        throw std::invalid_argument("shifted_patch: insufficient margin for shift (" + std::to_string(dy) + ", " +
                                    std::to_string(dx) + ")");
    FeatureMap out(size, size);
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) out(r, c) = bilinear(img, y0 + r, x0 + c);
    return out;
}

std::vector<FeatureMap> extract_shifted_patches(const FeatureMap& img, const ShiftProbe& probe) {
    Index2 anchor = probe.anchor;
    if (anchor.row < 0) anchor.row = (img.rows() - probe.patch_size) / 2;
    if (anchor.col < 0) anchor.col = (img.cols() - probe.patch_size) / 2;
    std::vector<FeatureMap> out;
    for (double s : probe.shifts) {
        const auto d = shift_vector(probe.axis, s);
        out.push_back(shifted_patch(img, anchor, probe.patch_size, d[0], d[1]));
    }
    return out;
}

double kl_divergence(const std::vector<double>& p, const std::vector<double>& q, double eps) {
    if (p.empty() || p.size() != q.size())
        throw std::invalid_argument("kl_divergence: vectors must be non-empty and of equal length");
    auto check = [](const std::vector<double>& v, const char* name) {
        double s = 0.0;
        for (double x : v) {
            if (!(x >= 0.0)) throw std::invalid_argument(std::string("kl_divergence: negative entry in ") + name);
            s += x;
        }
        if (std::abs(s - 1.0) > 1e-9)
            throw std::invalid_argument(std::string("kl_divergence: ") + name + " does not sum to 1");
    };
    check(p, "p");
    check(q, "q");
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] > 0.0) d += p[i] * std::log(p[i] / std::max(q[i], eps));
    return d;
}

double mean_flip_rate(const std::vector<std::vector<int>>& label_seqs, double baseline) {
    if (!(baseline > 0.0)) throw std::invalid_argument("mean_flip_rate: baseline must be > 0");
    long flips = 0;
    long total = 0;
    for (const auto& seq : label_seqs) {
        if (seq.size() < 2) throw std::invalid_argument("mean_flip_rate: each sequence needs >= 1 shift");
        for (std::size_t s = 1; s < seq.size(); ++s) {
            flips += seq[s] != seq[0];
            ++total;
        }
    }
    if (total == 0) throw std::invalid_argument("mean_flip_rate: no sequences");
    return static_cast<double>(flips) / static_cast<double>(total) / baseline;
}

double aligned_distance(const FeatureMap& shifted, const FeatureMap& reference, int dr, int dc, int border) {
    if (!shifted.same_shape(reference)) throw std::invalid_argument("aligned_distance: shape mismatch");
    const int r0 = std::max(border, border - dr);
    const int r1 = std::min(shifted.rows() - border, shifted.rows() - border - dr);
    const int c0 = std::max(border, border - dc);
    const int c1 = std::min(shifted.cols() - border, shifted.cols() - border - dc);
    if (r0 >= r1 || c0 >= c1) throw std::invalid_argument("aligned_distance: empty comparison window");
    double diff = 0.0;
    double ref = 0.0;
    for (int r = r0; r < r1; ++r)
        for (int c = c0; c < c1; ++c) {
            const double b = reference(r + dr, c + dc);
            const double d = shifted(r, c) - b;
            diff += d * d;
            ref += b * b;
        }
    if (ref == 0.0) return std::sqrt(diff);
    return std::sqrt(diff / ref);
}

ConsistencyReport feature_consistency(const ShiftOperator& op,
                                      const std::function<FeatureMap(double, double)>& source, ShiftAxis axis,
                                      const std::vector<double>& shifts) {
    if (op.period < 1) throw std::invalid_argument("feature_consistency: period must be >= 1");
    ConsistencyReport rep;
    rep.op = op.name;
    rep.axis = axis;
    const FeatureMap reference = op.apply(source(0.0, 0.0));
    for (double s : shifts) {
        const auto d = shift_vector(axis, s);
        const FeatureMap out = op.apply(source(d[0], d[1]));
        rep.shifts.push_back(s);
        rep.distances.push_back(aligned_distance(out, reference, nearest_toward_zero(d[0] / op.period),
                                                 nearest_toward_zero(d[1] / op.period), op.border));
    }
    return rep;
}

std::string consistency_csv(const std::vector<ConsistencyReport>& reports) {
    CsvTable t({"shift_px", "axis", "operator", "distance"});
    for (const auto& r : reports)
        for (std::size_t i = 0; i < r.shifts.size(); ++i)
            t.add_row({csv_number(r.shifts[i]), to_string(r.axis), r.op, csv_number(r.distances[i])});
    return t.str();
}

namespace {

// Correlation used by the operators; the periodic case keeps the kernel
// spectrum of the last input shape.
class KernelApplier {
public:
    explicit KernelApplier(ComplexMap w, Boundary b) : w_(std::move(w)), boundary_(b) {}

    ComplexMap operator()(const FeatureMap& x, int stride) const {
        if (boundary_ != Boundary::Periodic) return cross_correlate(x, w_, {boundary_, stride});
        std::lock_guard lock(mutex_);
        if (!cached_ || cached_->rows() != x.rows() || cached_->cols() != x.cols())
            cached_ = std::make_shared<PeriodicCorrelator>(w_, x.rows(), x.cols());
        return cached_->apply(x, stride);
    }

private:
    ComplexMap w_;
    Boundary boundary_;
    mutable std::mutex mutex_;
    mutable std::shared_ptr<PeriodicCorrelator> cached_;
};

}  // namespace

ShiftOperator make_rmax_operator(const ComplexMap& w, int m, Boundary boundary, int border) {
    auto re = std::make_shared<KernelApplier>(to_complex(real_part(w)), boundary);
    return {"rmax", 2 * m, border,
            [re, m, boundary](const FeatureMap& x) { return max_pool(real_part((*re)(x, m)), boundary); }};
}

ShiftOperator make_cmod_operator(const ComplexMap& w, int m, Boundary boundary, int border) {
    auto k = std::make_shared<KernelApplier>(w, boundary);
    return {"cmod", 2 * m, border, [k, m](const FeatureMap& x) { return modulus((*k)(x, 2 * m)); }};
}

ShiftOperator make_blur_operator(const ComplexMap& w, int m, int blur_size, Boundary boundary, int border) {
    binomial_row(blur_size);  // validates the size up front
    auto re = std::make_shared<KernelApplier>(to_complex(real_part(w)), boundary);
    return {"blur", 2 * m, border, [re, m, blur_size, boundary](const FeatureMap& x) {
                return blur_pool(max_filter3(real_part((*re)(x, m)), boundary), blur_size, boundary);
            }};
}

double StabilityResult::cmod_wins(double tol) const {
    if (cases.empty()) return 0.0;
    long wins = 0;
    for (const auto& c : cases) wins += c.cmod <= c.rmax + tol;
    return static_cast<double>(wins) / static_cast<double>(cases.size());
}

FrequencyBox in_band_box(const PacketCell& cell, int depth, double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0)) throw std::invalid_argument("in_band_box: fraction must lie in (0, 1]");
    const double width = std::numbers::pi / (1 << depth);
    const double ylo = cell.sigma > 0 ? cell.fy * width : -(cell.fy + 1) * width;
    const double margin = 0.5 * (1.0 - fraction) * width;
    return {{ylo + margin, cell.fx * width + margin}, {ylo + width - margin, (cell.fx + 1) * width - margin}};
}

StabilityResult shift_stability_sweep(const PacketBank& bank, const StabilityOptions& opt) {
    if (opt.probes < 1 || opt.sinusoids < 1) throw std::invalid_argument("shift_stability_sweep: empty probe set");
    if (!(opt.band_fraction > 0.0 && opt.band_fraction <= 1.0))
        throw std::invalid_argument("shift_stability_sweep: band_fraction must lie in (0, 1]");
    const int J = bank.depth;
    const int m = 1 << (J - 1);
    const int n = 1 << J;
    const int size = opt.image_size > 0 ? opt.image_size : 32 * n;
    const int kernels = bank.halfplane_count();

    std::vector<std::vector<StabilityCase>> per_kernel(static_cast<std::size_t>(kernels));
    std::vector<std::array<double, 2>> at_period(static_cast<std::size_t>(kernels), {0.0, 0.0});

    auto work = [&](int k) {
        const auto& cell = bank.cells[static_cast<std::size_t>(k)];
        const auto& w = bank.kernels[static_cast<std::size_t>(k)];
        const ShiftOperator rm = make_rmax_operator(w, m, Boundary::Periodic);
        const ShiftOperator cm = make_cmod_operator(w, m, Boundary::Periodic);
        const auto box = in_band_box(cell, J, opt.band_fraction);
        std::vector<double> shifts = opt.shifts;
        shifts.push_back(2.0 * m);
        for (int p = 0; p < opt.probes; ++p) {
            const std::uint64_t seed = opt.seed * 1000003ULL + static_cast<std::uint64_t>(k) * 1009ULL + p;
            const auto terms = bandlimited_probe(box.lo, box.hi, opt.sinusoids, seed, size);
            auto source = [&](double dy, double dx) { return render(terms, size, size, dy, dx); };
            const auto r = feature_consistency(rm, source, opt.axis, shifts);
            const auto c = feature_consistency(cm, source, opt.axis, shifts);
            for (std::size_t i = 0; i + 1 < shifts.size(); ++i)
                per_kernel[k].push_back({k, p, shifts[i], r.distances[i], c.distances[i]});
            auto& ap = at_period[static_cast<std::size_t>(k)];
            ap[0] = std::max(ap[0], c.distances.back());
            ap[1] = std::max(ap[1], r.distances.back());
        }
    };

    int threads = opt.threads > 0 ? opt.threads : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::clamp(threads, 1, kernels);
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (int k = next++; k < kernels; k = next++) work(k);
        });
    for (auto& th : pool) th.join();

    StabilityResult res;
    res.m = m;
    for (int k = 0; k < kernels; ++k) {
        res.cases.insert(res.cases.end(), per_kernel[k].begin(), per_kernel[k].end());
        res.max_cmod_at_period = std::max(res.max_cmod_at_period, at_period[k][0]);
        res.max_rmax_at_period = std::max(res.max_rmax_at_period, at_period[k][1]);
    }
    return res;
}

}  // namespace wavetwin

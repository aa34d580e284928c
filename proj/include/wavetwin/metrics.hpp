#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "wavetwin/map.hpp"
#include "wavetwin/ops.hpp"
#include "wavetwin/packet_bank.hpp"

namespace wavetwin {

enum class ShiftAxis { Horizontal, Vertical, Diagonal };
ShiftAxis parse_shift_axis(std::string_view s);
const char* to_string(ShiftAxis a);

/// Displacement (dy, dx) of a shift of `amount` pixels along an axis.
std::array<double, 2> shift_vector(ShiftAxis axis, double amount);

struct ShiftProbe {
    ShiftAxis axis = ShiftAxis::Horizontal;
    std::vector<double> shifts;  // multiples of 0.5 px
    int patch_size = 0;
    /// Top-left corner of the unshifted patch; negative means centred.
    Index2 anchor{-1, -1};
};

/// Patch whose sample (r, c) reads the image at (anchor + (r, c) + shift).
/// Integer shifts are read directly; half-pixel shifts come from a 2x
/// bilinear upsampling of the image, decimated back to the original grid.
FeatureMap shifted_patch(const FeatureMap& img, Index2 anchor, int size, double dy, double dx);

/// One patch per probe shift. Throws if any patch leaves the image.
std::vector<FeatureMap> extract_shifted_patches(const FeatureMap& img, const ShiftProbe& probe);

/// sum_i p_i log(p_i / max(q_i, eps)); p and q must be probability vectors.
double kl_divergence(const std::vector<double>& p, const std::vector<double>& q, double eps = 1e-12);

/// Each sequence holds the top-1 label of the unshifted input followed by
/// the labels for shifts 1..S. Returns the fraction of shifted labels that
/// differ from the unshifted one (over all sequences and shifts), divided
/// by `baseline`.
double mean_flip_rate(const std::vector<std::vector<int>>& label_seqs, double baseline = 1.0);

/// Operator under test, with its output sampling period in input pixels.
struct ShiftOperator {
    std::string name;
    int period = 1;
    int border = 0;  // output samples dropped on every side before comparing
    std::function<FeatureMap(const FeatureMap&)> apply;
};

struct ConsistencyReport {
    std::string op;
    ShiftAxis axis = ShiftAxis::Horizontal;
    std::vector<double> shifts;
    std::vector<double> distances;
};

/// Relative interior L2 distance between op(source(shift)) and op(source(0))
/// realigned by the nearest whole number of output samples (ties toward zero).
ConsistencyReport feature_consistency(const ShiftOperator& op,
                                      const std::function<FeatureMap(double dy, double dx)>& source,
                                      ShiftAxis axis, const std::vector<double>& shifts);

/// Distance between two maps after moving `b` back by (dr, dc) samples,
/// over the overlap minus `border` samples per side: |a - b'| / |b'|.
double aligned_distance(const FeatureMap& shifted, const FeatureMap& reference, int dr, int dc, int border);

/// CSV with header shift_px,axis,operator,distance.
std::string consistency_csv(const std::vector<ConsistencyReport>& reports);

/// The three single-channel first-layer operators compared throughout:
/// rmax (Re w at stride m, then 3x3/2 max), cmod (|x * w| at stride 2m),
/// and blur (Re w at stride m, 3x3/1 max, binomial blur pooling).
ShiftOperator make_rmax_operator(const ComplexMap& w, int m, Boundary boundary, int border = 0);
ShiftOperator make_cmod_operator(const ComplexMap& w, int m, Boundary boundary, int border = 0);
ShiftOperator make_blur_operator(const ComplexMap& w, int m, int blur_size, Boundary boundary, int border = 0);

/// Frequency box (lo, hi), each as (xi_2, xi_1), covering the central
/// `fraction` of a half-plane kernel's cell along both axes.
struct FrequencyBox {
    std::array<double, 2> lo;
    std::array<double, 2> hi;
};
FrequencyBox in_band_box(const PacketCell& cell, int depth, double fraction);

/// Paired rmax / cmod shift sweep over all half-plane kernels of a bank.
struct StabilityOptions {
    int probes = 20;            // random in-band probes per kernel
    int sinusoids = 3;          // terms per probe
    double band_fraction = 0.5; // probe box: this fraction of the cell, centred
    int image_size = 128;
    std::vector<double> shifts{0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0};
    ShiftAxis axis = ShiftAxis::Horizontal;
    std::uint64_t seed = 1;
    int threads = 0;            // 0: hardware concurrency
};

struct StabilityCase {
    int kernel = 0;
    int probe = 0;
    double shift = 0.0;
    double rmax = 0.0;
    double cmod = 0.0;
};

struct StabilityResult {
    int m = 0;
    std::vector<StabilityCase> cases;
    double max_cmod_at_period = 0.0;  // cmod variation for a shift of 2m px
    double max_rmax_at_period = 0.0;

    /// Fraction of cases with cmod <= rmax (+ tol).
    [[nodiscard]] double cmod_wins(double tol = 1e-12) const;
};

StabilityResult shift_stability_sweep(const PacketBank& bank, const StabilityOptions& opt);

}  // namespace wavetwin

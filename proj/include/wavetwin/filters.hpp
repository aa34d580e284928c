#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace wavetwin {

/// Orthonormal two-channel filter bank, cross-correlation taps.
///
/// Analysis: lo[n] = sum_k x[2n + k] * analysis_lo[k]. Synthesis filters are the
/// time-reversed analysis filters, so synthesis is the adjoint of analysis.
struct OrthoFilters {
    std::vector<double> analysis_lo;
    std::vector<double> analysis_hi;
    std::vector<double> synthesis_lo;
    std::vector<double> synthesis_hi;

    /// Builds hi = alternating-flip of lo, synthesis = time reverse.
    static OrthoFilters from_lowpass(std::vector<double> lo);

    /// Same bank with every filter time-reversed (half-sample delay partner for Q-shift lowpass).
    [[nodiscard]] OrthoFilters time_reversed() const;
};

/// Filters driving the dual tree: a first-stage bank (tree b runs it
/// `delay_offset` samples ahead of tree a) and a Q-shift bank for later stages
/// (tree b uses the time-reversed bank on the half-sample-delay branches).
struct FilterPair {
    std::string name;
    OrthoFilters first_stage;
    OrthoFilters qshift;
    int delay_offset = 1;
};

/// Named coefficient blocks parsed from the plain-text filter format:
/// a header line "# name length" followed by `length` coefficient lines.
using CoefficientTable = std::map<std::string, std::vector<double>, std::less<>>;

CoefficientTable parse_coefficients(std::string_view text);
CoefficientTable read_coefficient_file(const std::string& path);
std::string format_coefficients(const CoefficientTable& table);

/// Built-in coefficient table (compiled from data/filters.txt).
const CoefficientTable& builtin_coefficients();

/// Identifiers accepted by load_filter_pair.
std::vector<std::string> available_filter_pairs();

/// Loads a named pair, e.g. "qshift10" (= "qshift10+farras"). Throws
/// std::invalid_argument listing the available names for unknown identifiers
/// and std::runtime_error if the coefficients fail validation.
FilterPair load_filter_pair(std::string_view name);

/// Diagnostics used by the loader and the tests.
struct FilterDiagnostics {
    double lowpass_dc_error = 0.0;        // |sum(lo) - sqrt(2)|
    double orthonormality_error = 0.0;    // max |<h_i, h_j shifted 2l> - delta|
    double reconstruction_error = 0.0;    // PR error on a random periodic signal
};

FilterDiagnostics diagnose(const OrthoFilters& bank);

}  // namespace wavetwin

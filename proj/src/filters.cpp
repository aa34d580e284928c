#include "wavetwin/filters.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace wavetwin {

extern const char* const kBuiltinFilterText;  // generated from data/filters.txt

namespace {

constexpr double kInvariantTol = 1e-8;

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<double> reversed(std::vector<double> v) {
    std::ranges::reverse(v);
    return v;
}

double correlation(const std::vector<double>& a, const std::vector<double>& b, int lag) {
    double s = 0.0;
    const int n = static_cast<int>(a.size());
    for (int k = 0; k < n; ++k) {
        const int j = k + lag;
        if (j >= 0 && j < static_cast<int>(b.size())) s += a[k] * b[j];
    }
    return s;
}

const std::map<std::string, std::pair<std::string, std::string>, std::less<>>& pair_registry() {
    // identifier -> (first-stage lowpass block, Q-shift lowpass block)
    static const std::map<std::string, std::pair<std::string, std::string>, std::less<>> reg = {
        {"qshift10", {"farras_h0", "qshift10_h0a"}},
        {"qshift10+farras", {"farras_h0", "qshift10_h0a"}},
    };
    return reg;
}

}  // namespace

OrthoFilters OrthoFilters::from_lowpass(std::vector<double> lo) {
    if (lo.empty() || lo.size() % 2 != 0)
        throw std::invalid_argument("orthonormal lowpass must have even, nonzero length");
    const std::size_t n = lo.size();
    std::vector<double> hi(n);
    for (std::size_t k = 0; k < n; ++k) hi[k] = (k % 2 == 0 ? 1.0 : -1.0) * lo[n - 1 - k];
    OrthoFilters f;
    f.synthesis_lo = reversed(lo);
    f.synthesis_hi = reversed(hi);
    f.analysis_lo = std::move(lo);
    f.analysis_hi = std::move(hi);
    return f;
}

OrthoFilters OrthoFilters::time_reversed() const {
    return OrthoFilters{synthesis_lo, synthesis_hi, analysis_lo, analysis_hi};
}

CoefficientTable parse_coefficients(std::string_view text) {
    CoefficientTable table;
    std::istringstream in{std::string(text)};
    std::string line;
    std::string current;
    std::size_t expected = 0;
    int lineno = 0;
    auto finish = [&] {
        if (!current.empty() && table[current].size() != expected)
            throw std::runtime_error("filter block '" + current + "' declares " +
                                     std::to_string(expected) + " coefficients, found " +
                                     std::to_string(table[current].size()));
    };
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '#') {
            finish();
            std::istringstream hdr(t.substr(1));
            std::string name;
            long long len = -1;
            if (!(hdr >> name >> len) || len <= 0)
                throw std::runtime_error("line " + std::to_string(lineno) +
                                         ": expected header '# name length'");
            if (table.contains(name))
                throw std::runtime_error("duplicate filter block '" + name + "'");
            current = name;
            expected = static_cast<std::size_t>(len);
            table[current];
            continue;
        }
        if (current.empty())
            throw std::runtime_error("line " + std::to_string(lineno) + ": coefficient before header");
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(t, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != t.size())
            throw std::runtime_error("line " + std::to_string(lineno) + ": not a number: '" + t + "'");
        table[current].push_back(v);
    }
    finish();
    return table;
}

CoefficientTable read_coefficient_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open filter file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_coefficients(ss.str());
}

std::string format_coefficients(const CoefficientTable& table) {
    std::ostringstream out;
    out.precision(17);
    for (const auto& [name, coeffs] : table) {
        out << "# " << name << ' ' << coeffs.size() << '\n';
        for (double c : coeffs) out << c << '\n';
    }
    return out.str();
}

const CoefficientTable& builtin_coefficients() {
    static const CoefficientTable table = parse_coefficients(kBuiltinFilterText);
    return table;
}

std::vector<std::string> available_filter_pairs() {
    std::vector<std::string> names;
    for (const auto& [k, v] : pair_registry()) names.push_back(k);
    return names;
}

FilterDiagnostics diagnose(const OrthoFilters& bank) {
    FilterDiagnostics d;
    const auto& h0 = bank.analysis_lo;
    const auto& h1 = bank.analysis_hi;
    double sum = 0.0;
    for (double v : h0) sum += v;
    d.lowpass_dc_error = std::abs(sum - std::numbers::sqrt2);

    const int len = static_cast<int>(h0.size());
    for (int lag = -len; lag <= len; lag += 2) {
        const double delta = lag == 0 ? 1.0 : 0.0;
        d.orthonormality_error = std::max({d.orthonormality_error,
                                           std::abs(correlation(h0, h0, lag) - delta),
                                           std::abs(correlation(h1, h1, lag) - delta),
                                           std::abs(correlation(h0, h1, lag))});
    }

    // Periodic analysis, then upsample + convolve with the synthesis filters.
    const int n = 64;
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> gauss;
    std::vector<double> x(n);
    for (auto& v : x) v = gauss(rng);
    auto wrap = [n](int i) { return ((i % n) + n) % n; };
    std::vector<double> lo(n / 2, 0.0), hi(n / 2, 0.0);
    for (int i = 0; i < n / 2; ++i)
        for (int k = 0; k < len; ++k) {
            lo[i] += x[wrap(2 * i + k)] * h0[k];
            hi[i] += x[wrap(2 * i + k)] * h1[k];
        }
    const auto& g0 = bank.synthesis_lo;
    const auto& g1 = bank.synthesis_hi;
    std::vector<double> rec(n, 0.0);
    for (int i = 0; i < n / 2; ++i)
        for (int k = 0; k < len; ++k) {
            const int j = wrap(2 * i + len - 1 - k);
            rec[j] += lo[i] * g0[k] + hi[i] * g1[k];
        }
    for (int j = 0; j < n; ++j)
        d.reconstruction_error = std::max(d.reconstruction_error, std::abs(rec[j] - x[j]));
    return d;
}

FilterPair load_filter_pair(std::string_view name) {
    const auto& reg = pair_registry();
    const auto it = reg.find(name);
    if (it == reg.end()) {
        std::string msg = "unknown filter set '" + std::string(name) + "'; available:";
        for (const auto& n : available_filter_pairs()) msg += " " + n;
        throw std::invalid_argument(msg);
    }
    const auto& table = builtin_coefficients();
    auto block = [&](const std::string& key) -> const std::vector<double>& {
        const auto b = table.find(key);
        if (b == table.end()) throw std::runtime_error("missing coefficient block '" + key + "'");
        return b->second;
    };
    FilterPair p;
    p.name = std::string(name);
    p.first_stage = OrthoFilters::from_lowpass(block(it->second.first));
    p.qshift = OrthoFilters::from_lowpass(block(it->second.second));
    p.delay_offset = 1;
    for (const auto* bank : {&p.first_stage, &p.qshift}) {
        const auto d = diagnose(*bank);
        if (d.lowpass_dc_error > kInvariantTol || d.orthonormality_error > kInvariantTol ||
            d.reconstruction_error > kInvariantTol)
            throw std::runtime_error("filter set '" + p.name + "' fails orthonormality checks");
    }
    return p;
}

}  // namespace wavetwin

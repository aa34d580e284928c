#include "wavetwin/costmodel.hpp"

#include <cmath>
#include <stdexcept>

#include "wavetwin/csv.hpp"

namespace wavetwin::cost {

void OpCosts::validate() const {
    for (double t : {t_sum, t_prod, t_exp, t_mod, t_relu, t_maxpool})
        if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("OpCosts: every time must be positive");
}

Arch parse_arch(std::string_view s) {
    if (s == "alexnet" || s == "AlexNet") return Arch::AlexNet;
    if (s == "resnet" || s == "ResNet") return Arch::ResNet;
    throw std::invalid_argument("unknown architecture '" + std::string(s) + "' (expected alexnet or resnet)");
}

Variant parse_variant(std::string_view s) {
    if (s == "std") return Variant::Std;
    if (s == "blur") return Variant::Blur;
    if (s == "ablur") return Variant::ABlur;
    if (s == "cmod") return Variant::CMod;
    throw std::invalid_argument("unknown variant '" + std::string(s) + "' (expected std, blur, ablur or cmod)");
}

const char* to_string(Arch a) { return a == Arch::AlexNet ? "alexnet" : "resnet"; }

const char* to_string(Variant v) {
    switch (v) {
        case Variant::Std: return "std";
        case Variant::Blur: return "blur";
        case Variant::ABlur: return "ablur";
        case Variant::CMod: return "cmod";
    }
    return "?";
}

CostSpec CostSpec::for_arch(Arch arch, int N) {
    CostSpec s;
    s.arch = arch;
    s.N = N;
    s.m = arch == Arch::AlexNet ? 4 : 2;
    s.m_filt = arch == Arch::AlexNet ? 11 : 7;
    s.N_out = N / s.m;
    return s;
}

CostSpec CostSpec::at(int n_out) const {
    CostSpec s = *this;
    s.N_out = n_out;
    return s;
}

void CostSpec::validate() const {
    for (int v : {K, L, N, N_out, m, m_filt, m_bl, L_group})
        if (v <= 0) throw std::invalid_argument("CostSpec: dimensions must be positive");
    const int want_m = arch == Arch::AlexNet ? 4 : 2;
    const int want_filt = arch == Arch::AlexNet ? 11 : 7;
    if (m != want_m || m_filt != want_filt)
        throw std::invalid_argument(std::string("CostSpec: ") + to_string(arch) + " uses m=" +
                                    std::to_string(want_m) + " and " + std::to_string(want_filt) + "x" +
                                    std::to_string(want_filt) + " kernels");
    if (N % (2 * m) != 0) throw std::invalid_argument("CostSpec: N must be a multiple of 2m");
    if (L % L_group != 0) throw std::invalid_argument("CostSpec: L must be a multiple of L_group");
}

namespace {

double area(const CostSpec& s) {
    s.validate();
    return static_cast<double>(s.N_out) * s.N_out;
}

// Inner product of n terms: n multiplications, n - 1 additions.
double dot_cost(double n, const OpCosts& c) { return (n - 1.0) * c.t_sum + n * c.t_prod; }

}  // namespace

double flops_conv(const CostSpec& s, const OpCosts& c) {
    return area(s) * dot_cost(static_cast<double>(s.K) * s.m_filt * s.m_filt, c);
}

double flops_cconv(const CostSpec& s, const OpCosts& c) { return 2.0 * flops_conv(s, c); }

double flops_bias(const CostSpec& s, const OpCosts& c) { return area(s) * c.t_sum; }

double flops_relu(const CostSpec& s, const OpCosts& c) { return area(s) * c.t_relu; }

double flops_maxpool(const CostSpec& s, const OpCosts& c) { return area(s) * c.t_maxpool; }

double flops_modulus(const CostSpec& s, const OpCosts& c) { return area(s) * c.t_mod; }

double flops_bn(const CostSpec& s, const OpCosts& c) { return area(s) * (4.0 * c.t_sum + 3.0 * c.t_prod); }

double flops_bn0(const CostSpec& s, const OpCosts& c) { return area(s) * (c.t_sum + 3.0 * c.t_prod); }

double flops_blur(const CostSpec& s, const OpCosts& c) {
    return area(s) * dot_cost(static_cast<double>(s.m_bl) * s.m_bl, c);
}

std::array<double, 4> flops_ablur_stages(const CostSpec& s, const OpCosts& c) {
    const double a = area(s);
    const double per_group = static_cast<double>(s.m_bl) * s.m_bl / s.L_group;
    return {
        a * per_group * dot_cost(static_cast<double>(s.L) * s.m_bl * s.m_bl, c),
        a * per_group * (4.0 * c.t_sum + 3.0 * c.t_prod),
        a * per_group * (c.t_exp + c.t_sum + c.t_prod),
        flops_blur(s, c),
    };
}

double flops_ablur(const CostSpec& s, const OpCosts& c) {
    const auto st = flops_ablur_stages(s, c);
    return st[0] + st[1] + st[2] + st[3];
}

double flops_ablur_closed_form(const CostSpec& s, const OpCosts& c) {
    const double a = area(s);
    const double b2 = static_cast<double>(s.m_bl) * s.m_bl;
    const double per_group = b2 / s.L_group;
    return a * per_group *
           (((s.L + 1) * b2 + 3.0) * c.t_sum + ((s.L + 1) * b2 + 4.0) * c.t_prod + c.t_exp);
}

PipelineCost pipeline_breakdown(Variant v, const CostSpec& spec, const OpCosts& c) {
    spec.validate();
    c.validate();
    const bool alex = spec.arch == Arch::AlexNet;
    const int base = spec.N / spec.m;  // output side of the baseline conv
    PipelineCost p;
    auto add = [&](const char* name, int n_out, double (*f)(const CostSpec&, const OpCosts&)) {
        p.terms.push_back({name, n_out, f(spec.at(n_out), c)});
    };
    switch (v) {
        case Variant::Std:
            add("conv", base, flops_conv);
            if (!alex) add("bn", base, flops_bn);
            add("bias", base, flops_bias);
            add("relu", base, flops_relu);
            add("maxpool", base / 2, flops_maxpool);
            break;
        case Variant::Blur:
            if (alex) {
                add("conv", 2 * base, flops_conv);
                add("bias", 2 * base, flops_bias);
                add("relu", 2 * base, flops_relu);
                add("blur", base, flops_blur);
                add("max", base, flops_maxpool);
                add("blur", base / 2, flops_blur);
            } else {
                add("conv", base, flops_conv);
                add("bn", base, flops_bn);
                add("bias", base, flops_bias);
                add("relu", base, flops_relu);
                add("max", base, flops_maxpool);
                add("blur", base / 2, flops_blur);
            }
            break;
        case Variant::ABlur:
            if (alex) throw std::invalid_argument("pipeline: adaptive blur pooling is defined for resnet only");
            add("conv", base, flops_conv);
            add("bn", base, flops_bn);
            add("bias", base, flops_bias);
            add("relu", base, flops_relu);
            add("max", base, flops_maxpool);
            add("ablur", base / 2, flops_ablur);
            break;
        case Variant::CMod:
            add("cconv", base / 2, flops_cconv);
            add("modulus", base / 2, flops_modulus);
            if (!alex) add("bn0", base / 2, flops_bn0);
            add("bias", base / 2, flops_bias);
            add("relu", base / 2, flops_relu);
            break;
    }
    for (const auto& t : p.terms) p.total += t.flops;
    return p;
}

double pipeline_flops(Variant v, const CostSpec& spec, const OpCosts& c) {
    return pipeline_breakdown(v, spec, c).total;
}

std::vector<MemoryItem> memory_table(Variant v, const CostSpec& spec) {
    spec.validate();
    const bool alex = spec.arch == Arch::AlexNet;
    const double n1 = static_cast<double>(spec.N) / spec.m;  // N/m
    const double n2 = n1 / 2.0;                              // N/2m
    std::vector<MemoryItem> t;
    switch (v) {
        case Variant::Std:
            if (alex) {
                t = {{"relu->maxpool", 1, n1}, {"maxpool->output", 1, n2}, {"maxpool indices", 2, n2}};
            } else {
                t = {{"conv->bn", 1, n1},
                     {"bn metrics", 4, 0},
                     {"relu->maxpool", 1, n1},
                     {"maxpool->output", 1, n2},
                     {"maxpool indices", 2, n2}};
            }
            break;
        case Variant::Blur:
        case Variant::ABlur:
            if (alex) {
                if (v == Variant::ABlur)
                    throw std::invalid_argument("memory: adaptive blur pooling is defined for resnet only");
                t = {{"relu->blurpool", 1, 2 * n1},
                     {"blurpool->max", 1, n1},
                     {"max->blurpool", 1, n1},
                     {"max indices", 2, n1},
                     {"blurpool->output", 1, n2}};
            } else {
                t = {{"conv->bn", 1, n1},   {"bn metrics", 4, 0},  {"relu->max", 1, n1},
                     {"max->blurpool", 1, n1}, {"max indices", 2, n1}, {"blurpool->output", 1, n2}};
                if (v == Variant::ABlur) {
                    const double g = static_cast<double>(spec.m_bl) * spec.m_bl / spec.L_group;
                    t.push_back({"filter conv->bn", g, n2});
                    t.push_back({"filter bn metrics", 4 * g, 0});
                    t.push_back({"filter softmax->output", g, n2});
                }
            }
            break;
        case Variant::CMod:
            t = {{"cconv->modulus", 2, n2}, {"modulus->bias", 1, n2}};
            if (!alex) t.push_back({"bn0 metrics", 2, 0});
            t.push_back({"relu->output", 1, n2});
            break;
    }
    return t;
}

double mem_footprint(Variant v, const CostSpec& spec) {
    double total = 0.0;
    for (const auto& item : memory_table(v, spec)) total += item.size();
    return total;
}

double mem_closed_form(Variant v, const CostSpec& spec) {
    spec.validate();
    const bool alex = spec.arch == Arch::AlexNet;
    const double r = static_cast<double>(spec.N) * spec.N / (static_cast<double>(spec.m) * spec.m);  // N^2/m^2
    switch (v) {
        case Variant::Std: return alex ? 7.0 / 4.0 * r : 11.0 / 4.0 * r + 4.0;
        case Variant::Blur: return alex ? 33.0 / 4.0 * r : 21.0 / 4.0 * r + 4.0;
        case Variant::ABlur: {
            if (alex) throw std::invalid_argument("memory: adaptive blur pooling is defined for resnet only");
            const double g = static_cast<double>(spec.m_bl) * spec.m_bl / spec.L_group;
            return 21.0 / 4.0 * r + 4.0 + g * (r / 2.0 + 4.0);
        }
        case Variant::CMod: return alex ? r : r + 2.0;
    }
    return 0.0;
}

std::vector<Table4Row> table4(int N, const OpCosts& c) {
    std::vector<Table4Row> rows;
    for (Arch a : {Arch::AlexNet, Arch::ResNet}) {
        const CostSpec s = CostSpec::for_arch(a, N);
        const double f0 = pipeline_flops(Variant::Std, s, c);
        const double m0 = mem_footprint(Variant::Std, s);
        for (Variant v : {Variant::Blur, Variant::ABlur, Variant::CMod}) {
            if (a == Arch::AlexNet && v == Variant::ABlur) continue;
            rows.push_back({v, a, pipeline_flops(v, s, c) / f0, mem_footprint(v, s) / m0});
        }
    }
    return rows;
}

const std::vector<Table4Target>& table4_targets() {
    static const std::vector<Table4Target> targets{
        {Variant::Blur, Arch::AlexNet, 4.0, 4.7, 0.1, 0.05},
        {Variant::CMod, Arch::AlexNet, 0.5, 0.6, 0.1, 0.05},
        {Variant::Blur, Arch::ResNet, 1.0, 1.9, 0.1, 0.05},
        {Variant::ABlur, Arch::ResNet, 2.1, 2.0, 0.1, 0.15},
        {Variant::CMod, Arch::ResNet, 0.5, 0.4, 0.1, 0.05},
    };
    return targets;
}

std::vector<Table4Check> check_table4(const std::vector<Table4Row>& rows) {
    std::vector<Table4Check> out;
    for (const auto& t : table4_targets()) {
        const Table4Row* found = nullptr;
        for (const auto& r : rows)
            if (r.method == t.method && r.arch == t.arch) found = &r;
        if (!found)
            throw std::invalid_argument(std::string("check_table4: missing row ") + to_string(t.method) + "/" +
                                        to_string(t.arch));
        out.push_back({*found, t, std::abs(found->flops_ratio - t.flops) <= t.flops_tol,
                       std::abs(found->mem_ratio - t.mem) <= t.mem_tol});
    }
    return out;
}

std::string table4_csv(const std::vector<Table4Row>& rows) {
    CsvTable t({"method", "arch", "flops_ratio", "mem_ratio"});
    for (const auto& r : rows)
        t.add_row({to_string(r.method), to_string(r.arch), csv_number(r.flops_ratio), csv_number(r.mem_ratio)});
    return t.str();
}

}  // namespace wavetwin::cost

#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace wavetwin::cost {

/// Relative time of each elementary operation, normalized to one addition.
struct OpCosts {
    double t_sum = 1.0;
    double t_prod = 1.0;
    double t_exp = 0.75;
    double t_mod = 3.5;
    double t_relu = 0.75;
    double t_maxpool = 12.0;

    void validate() const;
};

enum class Arch { AlexNet, ResNet };
enum class Variant { Std, Blur, ABlur, CMod };

Arch parse_arch(std::string_view s);
Variant parse_variant(std::string_view s);
const char* to_string(Arch a);
const char* to_string(Variant v);

/// Dimensions of a first layer. `N_out` is the output side of the layer
/// being costed; pipeline_flops sets it per layer.
struct CostSpec {
    Arch arch = Arch::AlexNet;
    int K = 3;
    int L = 64;
    int N = 224;
    int N_out = 56;
    int m = 4;
    int m_filt = 11;
    int m_bl = 3;
    int L_group = 8;

    /// Baseline values: AlexNet m=4, 11x11 kernels; ResNet m=2, 7x7 kernels.
    static CostSpec for_arch(Arch arch, int N = 224);
    [[nodiscard]] CostSpec at(int n_out) const;
    /// Throws std::invalid_argument on nonpositive or inconsistent dimensions.
    void validate() const;
};

// Per-output-channel FLOPs of one layer.
double flops_conv(const CostSpec& s, const OpCosts& c = {});
double flops_cconv(const CostSpec& s, const OpCosts& c = {});
double flops_bias(const CostSpec& s, const OpCosts& c = {});
double flops_relu(const CostSpec& s, const OpCosts& c = {});
double flops_maxpool(const CostSpec& s, const OpCosts& c = {});
double flops_modulus(const CostSpec& s, const OpCosts& c = {});
double flops_bn(const CostSpec& s, const OpCosts& c = {});
/// Batch normalization without centering: second moment, scale, affine factor.
double flops_bn0(const CostSpec& s, const OpCosts& c = {});
double flops_blur(const CostSpec& s, const OpCosts& c = {});

/// Adaptive blur pooling stages: filter-generating conv, its BN, softmax, blur.
std::array<double, 4> flops_ablur_stages(const CostSpec& s, const OpCosts& c = {});
/// Sum of the four stages.
double flops_ablur(const CostSpec& s, const OpCosts& c = {});
/// The single-bracket closed form, which also scales the final blur stage
/// by m_bl^2 / L_group and so exceeds the stage sum by
/// (m_bl^2 / L_group - 1) * flops_blur.
double flops_ablur_closed_form(const CostSpec& s, const OpCosts& c = {});

struct CostTerm {
    std::string layer;
    int n_out = 0;
    double flops = 0.0;
};

struct PipelineCost {
    std::vector<CostTerm> terms;
    double total = 0.0;
};

/// Layer chain of a first block, costed per output channel.
///   std   AlexNet: conv, bias, relu, maxpool
///         ResNet:  conv, bn, bias, relu, maxpool
///   blur  AlexNet: conv (stride m/2), bias, relu, blur, max (stride 1), blur
///         ResNet:  conv, bn, bias, relu, max (stride 1), blur
///   ablur ResNet only; blur replaced by adaptive blur
///   cmod  AlexNet: cconv (stride 2m), modulus, bias, relu
///         ResNet:  cconv, modulus, bn0, bias, relu
PipelineCost pipeline_breakdown(Variant v, const CostSpec& spec, const OpCosts& c = {});
double pipeline_flops(Variant v, const CostSpec& spec, const OpCosts& c = {});

/// One saved tensor, in units of one output channel: `depth` channels per
/// output channel, `side` x `side` samples (side 0 for 1D metric vectors,
/// counted as `depth` values).
struct MemoryItem {
    std::string label;
    double depth = 1.0;
    double side = 0.0;
    [[nodiscard]] double size() const { return side > 0.0 ? depth * side * side : depth; }
};

std::vector<MemoryItem> memory_table(Variant v, const CostSpec& spec);
/// Sum of memory_table.
double mem_footprint(Variant v, const CostSpec& spec);
/// Closed-form totals including the additive constants.
double mem_closed_form(Variant v, const CostSpec& spec);

struct Table4Row {
    Variant method = Variant::Std;
    Arch arch = Arch::AlexNet;
    double flops_ratio = 0.0;
    double mem_ratio = 0.0;
};

/// Ratios against the Std variant for every defined (arch, method) pair.
std::vector<Table4Row> table4(int N = 224, const OpCosts& c = {});

struct Table4Target {
    Variant method;
    Arch arch;
    double flops;
    double mem;
    double flops_tol;
    double mem_tol;
};

/// Published ratios with their comparison tolerances.
const std::vector<Table4Target>& table4_targets();

struct Table4Check {
    Table4Row row;
    Table4Target target;
    bool flops_ok = false;
    bool mem_ok = false;
};

std::vector<Table4Check> check_table4(const std::vector<Table4Row>& rows);

/// CSV with header method,arch,flops_ratio,mem_ratio.
std::string table4_csv(const std::vector<Table4Row>& rows);

}  // namespace wavetwin::cost

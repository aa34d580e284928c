#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "wavetwin/costmodel.hpp"
#include "wavetwin/metrics.hpp"
#include "wavetwin/ops.hpp"
#include "wavetwin/packet_bank.hpp"
#include "wavetwin/spectral.hpp"
#include "wavetwin/twinblock.hpp"
#include "wavetwin/wpt.hpp"

namespace py = pybind11;
using namespace wavetwin;

namespace {

template <typename T>
using Array = py::array_t<T, py::array::c_style | py::array::forcecast>;

template <typename T>
Map2D<T> to_map(const Array<T>& a, std::optional<std::pair<int, int>> origin = std::nullopt) {
    if (a.ndim() != 2) throw std::invalid_argument("expected a 2D array");
    const int rows = static_cast<int>(a.shape(0));
    const int cols = static_cast<int>(a.shape(1));
    std::vector<T> data(a.data(), a.data() + a.size());
    Index2 o{};
    if (origin) o = {origin->first, origin->second};
    return Map2D<T>(rows, cols, std::move(data), o);
}

template <typename T>
Array<T> to_array(const Map2D<T>& m) {
    Array<T> out({m.rows(), m.cols()});
    std::copy(m.data().begin(), m.data().end(), out.mutable_data());
    return out;
}

ComplexMap kernel_from(const Array<cplx>& k, std::optional<std::pair<int, int>> origin) {
    if (!origin) origin = std::make_pair(static_cast<int>(k.shape(0)) / 2, static_cast<int>(k.shape(1)) / 2);
    return to_map(k, origin);
}

std::vector<MixingMatrix> to_mixing(const std::vector<Array<double>>& mats) {
    std::vector<MixingMatrix> out;
    for (const auto& a : mats) {
        if (a.ndim() != 2) throw std::invalid_argument("mixing matrices must be 2D");
        out.emplace_back(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)),
                         std::vector<double>(a.data(), a.data() + a.size()));
    }
    return out;
}

Array<double> from_mixing(const MixingMatrix& m) {
    Array<double> out({m.rows, m.cols});
    std::copy(m.a.begin(), m.a.end(), out.mutable_data());
    return out;
}

template <typename T>
std::vector<Array<T>> to_arrays(const MultiChannel<T>& mc) {
    std::vector<Array<T>> out;
    for (const auto& m : mc) out.push_back(to_array(m));
    return out;
}

MultiChannelMap to_channels(const std::vector<Array<double>>& xs) {
    MultiChannelMap out;
    for (const auto& x : xs) out.push_back(to_map(x));
    return out;
}

}  // namespace

PYBIND11_MODULE(_wavetwin, m) {
    m.doc() = "Dual-tree complex wavelet packets, RMax/CMod operators and cost model";

    py::enum_<PacketClass>(m, "PacketClass")
        .value("Lowpass", PacketClass::Lowpass)
        .value("Boundary", PacketClass::Boundary)
        .value("Bandpass", PacketClass::Bandpass);

    py::class_<PacketCell>(m, "PacketCell")
        .def_readonly("sigma", &PacketCell::sigma)
        .def_readonly("fy", &PacketCell::fy)
        .def_readonly("fx", &PacketCell::fx)
        .def_readonly("conjugate", &PacketCell::conjugate)
        .def_readonly("kind", &PacketCell::kind)
        .def("__repr__", [](const PacketCell& c) {
            return "PacketCell(sigma=" + std::to_string(c.sigma) + ", fy=" + std::to_string(c.fy) +
                   ", fx=" + std::to_string(c.fx) + ", conjugate=" + (c.conjugate ? "True" : "False") + ", kind=" +
                   to_string(c.kind) + ")";
        });

    py::class_<PacketBank>(m, "PacketBank")
        .def_readonly("depth", &PacketBank::depth)
        .def_readonly("cells", &PacketBank::cells)
        .def("__len__", &PacketBank::size)
        .def_property_readonly("halfplane_count", &PacketBank::halfplane_count)
        .def("kernel", [](const PacketBank& b, int i) { return to_array(b.kernels.at(static_cast<std::size_t>(i))); },
             py::arg("index"), "Kernel i as a complex array (cross-correlation taps).")
        .def("origin", [](const PacketBank& b, int i) {
            const Index2 o = b.kernels.at(static_cast<std::size_t>(i)).origin();
            return std::make_pair(o.row, o.col);
        }, py::arg("index"), "Storage index of the kernel's zero tap.")
        .def("index_of", &PacketBank::index_of, py::arg("sigma"), py::arg("fy"), py::arg("fx"))
        .def("lowpass_indices", &PacketBank::lowpass_indices);

    m.def("available_filter_pairs", &available_filter_pairs);
    m.def(
        "build_packet_bank",
        [](int depth, const std::string& filters) { return build_packet_bank(load_filter_pair(filters), depth); },
        py::arg("depth"), py::arg("filters") = "qshift10");
    m.def(
        "positive_fraction",
        [](const PacketBank& b, int gridsize) {
            std::vector<double> out;
            for (const auto& d : diagnose_bank(b, gridsize)) out.push_back(d.positive_fraction);
            return out;
        },
        py::arg("bank"), py::arg("gridsize") = 256, "Share of spectral energy at xi_1 >= 0 per half-plane kernel.");

    m.def(
        "wpt_forward",
        [](const Array<double>& x, int depth, const std::string& combo, bool undecimated, const std::string& filters) {
            const auto packets =
                wpt_forward(to_map(x), load_filter_pair(filters), parse_tree_combo(combo), depth, undecimated);
            std::vector<Array<double>> out;
            for (const auto& p : packets) out.push_back(to_array(p));
            return out;
        },
        py::arg("x"), py::arg("depth"), py::arg("combo") = "aa", py::arg("undecimated") = false,
        py::arg("filters") = "qshift10");
    m.def(
        "wpt_inverse",
        [](const std::vector<Array<double>>& packets, int depth, const std::string& combo, bool undecimated,
           const std::string& filters) {
            std::vector<FeatureMap> maps;
            for (const auto& p : packets) maps.push_back(to_map(p));
            return to_array(
                wpt_inverse(maps, load_filter_pair(filters), parse_tree_combo(combo), depth, undecimated));
        },
        py::arg("packets"), py::arg("depth"), py::arg("combo") = "aa", py::arg("undecimated") = false,
        py::arg("filters") = "qshift10");

    m.def(
        "dt_features", [](const Array<double>& x, const PacketBank& b) { return to_arrays(dt_features(to_map(x), b)); },
        py::arg("x"), py::arg("bank"), "Real packet responses at stride 2^(J-1).");
    m.def(
        "dt_features_complex",
        [](const Array<double>& x, const PacketBank& b) { return to_arrays(dt_features_complex(to_map(x), b)); },
        py::arg("x"), py::arg("bank"), "Complex packet responses at stride 2^J.");

    m.def(
        "cross_correlate",
        [](const Array<double>& x, const Array<cplx>& k, std::optional<std::pair<int, int>> origin, int stride,
           const std::string& boundary) {
            return to_array(cross_correlate(to_map(x), kernel_from(k, origin), {parse_boundary(boundary), stride}));
        },
        py::arg("x"), py::arg("kernel"), py::arg("origin") = py::none(), py::arg("stride") = 1,
        py::arg("boundary") = "symmetric");
    m.def(
        "rmax",
        [](const Array<double>& x, const Array<cplx>& k, int mstride, std::optional<std::pair<int, int>> origin,
           const std::string& boundary) {
            const ComplexMap w = kernel_from(k, origin);
            KernelTensor V{{real_part(w)}};
            V[0][0].set_origin(w.origin());
            MultiChannelMap X;
            X.push_back(to_map(x));
            return to_array(wavetwin::rmax(X, V, mstride, parse_boundary(boundary))[0]);
        },
        py::arg("x"), py::arg("kernel"), py::arg("m"), py::arg("origin") = py::none(),
        py::arg("boundary") = "symmetric", "max_pool((x * Re w) downsampled by m).");
    m.def(
        "cmod",
        [](const Array<double>& x, const Array<cplx>& k, int mstride, std::optional<std::pair<int, int>> origin,
           const std::string& boundary) {
            ComplexKernelTensor W{{kernel_from(k, origin)}};
            MultiChannelMap X;
            X.push_back(to_map(x));
            return to_array(wavetwin::cmod(X, W, mstride, parse_boundary(boundary))[0]);
        },
        py::arg("x"), py::arg("kernel"), py::arg("m"), py::arg("origin") = py::none(),
        py::arg("boundary") = "symmetric", "|x * w| downsampled by 2m.");
    m.def(
        "max_pool",
        [](const Array<double>& y, const std::string& boundary) {
            return to_array(max_pool(to_map(y), parse_boundary(boundary)));
        },
        py::arg("y"), py::arg("boundary") = "symmetric");
    m.def(
        "blur_pool",
        [](const Array<double>& y, int size, const std::string& boundary) {
            return to_array(blur_pool(to_map(y), size, parse_boundary(boundary)));
        },
        py::arg("y"), py::arg("size") = 3, py::arg("boundary") = "symmetric");
    m.def(
        "hilbert2d",
        [](const Array<double>& v) {
            const ComplexMap h = hilbert2d(to_map(v));
            return std::make_pair(to_array(h), std::make_pair(h.origin().row, h.origin().col));
        },
        py::arg("v"), "Analytic extension v + iHv on a padded grid, with the grid index of v[0, 0].");

    m.def(
        "verify_prop1",
        [](const Array<cplx>& k, const Array<double>& x, int mstride, std::optional<std::pair<int, int>> origin,
           const std::string& boundary) {
            return verify_prop1(kernel_from(k, origin), to_map(x), mstride, parse_boundary(boundary)).value;
        },
        py::arg("kernel"), py::arg("x"), py::arg("m"), py::arg("origin") = py::none(),
        py::arg("boundary") = "periodic");
    m.def(
        "verify_prop2",
        [](const Array<cplx>& k, const Array<double>& x, int mstride, std::optional<std::pair<int, int>> origin,
           const std::string& boundary) {
            return verify_prop2(kernel_from(k, origin), to_map(x), mstride, parse_boundary(boundary)).value;
        },
        py::arg("kernel"), py::arg("x"), py::arg("m"), py::arg("origin") = py::none(),
        py::arg("boundary") = "periodic");
    m.def(
        "synthetic_bandlimited_kernel",
        [](int size, int mstride, int cx, int cy, std::uint64_t seed) {
            const ComplexMap k = synthetic_bandlimited_kernel(size, mstride, cx, cy, seed);
            return std::make_pair(to_array(k), std::make_pair(k.origin().row, k.origin().col));
        },
        py::arg("size"), py::arg("m"), py::arg("cell_x"), py::arg("cell_y"), py::arg("seed") = 1);

    m.def(
        "sparsity_penalty",
        [](const std::vector<Array<double>>& A, const std::vector<double>& lambda) {
            return sparsity_penalty(to_mixing(A), lambda);
        },
        py::arg("matrices"), py::arg("lambdas"));
    m.def(
        "sparsity_subgradient",
        [](const std::vector<Array<double>>& A, const std::vector<double>& lambda) {
            std::vector<Array<double>> out;
            for (const auto& g : sparsity_subgradient(to_mixing(A), lambda)) out.push_back(from_mixing(g));
            return out;
        },
        py::arg("matrices"), py::arg("lambdas"));
    m.def("kl_divergence", &kl_divergence, py::arg("p"), py::arg("q"), py::arg("eps") = 1e-12);
    m.def("mean_flip_rate", &mean_flip_rate, py::arg("label_seqs"), py::arg("baseline") = 1.0);

    py::class_<TwinConfig>(m, "TwinConfig")
        .def_static("from_json", &parse_twin_config, py::arg("text"))
        .def_static("load", &load_twin_config, py::arg("path"))
        .def_readonly("arch", &TwinConfig::arch)
        .def_readonly("J", &TwinConfig::J)
        .def_readonly("m", &TwinConfig::m)
        .def_readonly("L_low", &TwinConfig::L_low)
        .def_readonly("L_high", &TwinConfig::L_high)
        .def("selected_packets", &TwinConfig::selected_packets)
        .def("group_sizes", &TwinConfig::group_sizes)
        .def("to_json", [](const TwinConfig& c) { return to_json(c); });
    m.def(
        "one_hot_mixing",
        [](const TwinConfig& c, std::uint64_t seed) {
            std::vector<Array<double>> out;
            for (const auto& a : one_hot_mixing(c, seed)) out.push_back(from_mixing(a));
            return out;
        },
        py::arg("config"), py::arg("seed") = 1);
    m.def(
        "wblock_forward",
        [](const std::vector<Array<double>>& X, const TwinConfig& c, const PacketBank& b,
           const std::vector<Array<double>>& A) { return to_arrays(wblock_forward(to_channels(X), c, b, to_mixing(A))); },
        py::arg("channels"), py::arg("config"), py::arg("bank"), py::arg("mixing"));
    m.def(
        "cwblock_forward",
        [](const std::vector<Array<double>>& X, const TwinConfig& c, const PacketBank& b,
           const std::vector<Array<double>>& A) { return to_arrays(cwblock_forward(to_channels(X), c, b, to_mixing(A))); },
        py::arg("channels"), py::arg("config"), py::arg("bank"), py::arg("mixing"));

    m.def(
        "cost_table",
        [](int N) {
            std::vector<py::dict> rows;
            for (const auto& r : cost::table4(N)) {
                py::dict d;
                d["method"] = cost::to_string(r.method);
                d["arch"] = cost::to_string(r.arch);
                d["flops_ratio"] = r.flops_ratio;
                d["mem_ratio"] = r.mem_ratio;
                rows.push_back(d);
            }
            return rows;
        },
        py::arg("N") = 224, "FLOP and memory ratios of each variant against the standard first block.");
    m.def(
        "pipeline_flops",
        [](const std::string& variant, const std::string& arch, int N) {
            return cost::pipeline_flops(cost::parse_variant(variant), cost::CostSpec::for_arch(cost::parse_arch(arch), N));
        },
        py::arg("variant"), py::arg("arch"), py::arg("N") = 224);
    m.def(
        "mem_footprint",
        [](const std::string& variant, const std::string& arch, int N) {
            return cost::mem_footprint(cost::parse_variant(variant), cost::CostSpec::for_arch(cost::parse_arch(arch), N));
        },
        py::arg("variant"), py::arg("arch"), py::arg("N") = 224);
}

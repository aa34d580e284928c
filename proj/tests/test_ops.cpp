#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "wavetwin/ops.hpp"

using namespace wavetwin;

namespace {

FeatureMap with_origin(FeatureMap k, Index2 o) {
    k.set_origin(o);
    return k;
}

}  // namespace

TEST_CASE("boundary names") {
    for (Boundary b : {Boundary::Zero, Boundary::Symmetric, Boundary::Periodic})
        CHECK(parse_boundary(to_string(b)) == b);
    CHECK_THROWS_AS(parse_boundary("reflect"), std::invalid_argument);
}

TEST_CASE("boundary extension rules") {
    FeatureMap x(1, 4);
    for (int c = 0; c < 4; ++c) x(0, c) = c + 1.0;
    // half-sample mirror: ... 2 1 | 1 2 3 4 | 4 3 ...
    CHECK(sample_extended(x, 0, -1, Boundary::Symmetric) == 1.0);
    CHECK(sample_extended(x, 0, -2, Boundary::Symmetric) == 2.0);
    CHECK(sample_extended(x, 0, 4, Boundary::Symmetric) == 4.0);
    CHECK(sample_extended(x, 0, 5, Boundary::Symmetric) == 3.0);
    CHECK(sample_extended(x, 0, -1, Boundary::Periodic) == 4.0);
    CHECK(sample_extended(x, 0, 9, Boundary::Periodic) == 2.0);
    CHECK(sample_extended(x, 0, -1, Boundary::Zero) == 0.0);
    for (int c = -12; c < 16; ++c)
        for (Boundary b : {Boundary::Zero, Boundary::Symmetric, Boundary::Periodic}) {
            const int i = oracle::extend(c, 4, b);
            CHECK(sample_extended(x, 0, c, b) == (i < 0 ? 0.0 : x(0, i)));
        }
}

TEST_CASE("cross-correlation matches the direct oracle for every method, boundary and stride") {
    const FeatureMap x = oracle::random_map(23, 18, 11);
    const FeatureMap v = with_origin(oracle::random_map(5, 4, 12), {2, 1});
    const ComplexMap w = [] {
        ComplexMap k = oracle::random_complex(7, 6, 13);
        k.set_origin({3, 2});
        return k;
    }();
    for (Boundary b : {Boundary::Zero, Boundary::Symmetric, Boundary::Periodic})
        for (int stride : {1, 2, 3})
            for (ConvMethod method : {ConvMethod::Direct, ConvMethod::Fourier, ConvMethod::Auto}) {
                CAPTURE(to_string(b));
                CAPTURE(stride);
                const CorrelateOptions opt{b, stride, method};
                const FeatureMap y = cross_correlate(x, v, opt);
                const FeatureMap ry = oracle::correlate(x, v, stride, b);
                REQUIRE(y.same_shape(ry));
                CHECK(max_abs_diff(y, ry) < 1e-11);
                const ComplexMap z = cross_correlate(x, w, opt);
                CHECK(max_abs_diff(z, oracle::correlate(x, w, stride, b)) < 1e-11);
            }
}

TEST_CASE("correlation with a delta returns the input, shifted by the kernel offset") {
    const FeatureMap x = oracle::random_map(9, 9, 3);
    const FeatureMap delta = with_origin(FeatureMap(1, 1, 1.0), {0, 0});
    CHECK(max_abs_diff(cross_correlate(x, delta), x) == 0.0);

    // Tap at lattice +1 along columns: y[n] = x[n + 1].
    FeatureMap shift(1, 3);
    shift(0, 2) = 1.0;
    shift.set_origin({0, 1});
    const FeatureMap y = cross_correlate(x, shift, {Boundary::Periodic, 1, ConvMethod::Direct});
    for (int r = 0; r < 9; ++r)
        for (int c = 0; c < 9; ++c) CHECK(y(r, c) == x(r, (c + 1) % 9));
}

TEST_CASE("periodic correlator agrees with cross_correlate") {
    const FeatureMap x = oracle::random_map(32, 24, 5);
    ComplexMap w = oracle::random_complex(9, 9, 6);
    w.set_origin({4, 4});
    const PeriodicCorrelator pc(w, 32, 24);
    for (int stride : {1, 2, 4}) {
        const ComplexMap ref = cross_correlate(x, w, {Boundary::Periodic, stride, ConvMethod::Direct});
        CHECK(max_abs_diff(pc.apply(x, stride), ref) < 1e-11);
    }
    // kernel larger than the grid folds around it
    ComplexMap big = oracle::random_complex(40, 40, 7);
    big.set_origin({20, 20});
    const FeatureMap small = oracle::random_map(16, 16, 8);
    const PeriodicCorrelator pb(big, 16, 16);
    CHECK(max_abs_diff(pb.apply(small, 2), oracle::correlate(small, big, 2, Boundary::Periodic)) < 1e-10);
    CHECK_THROWS(pc.apply(oracle::random_map(16, 16, 1)));
}

TEST_CASE("subsampling") {
    const FeatureMap x = oracle::random_map(7, 6, 2);
    const FeatureMap s = subsample(x, 3);
    REQUIRE((s.rows() == 3 && s.cols() == 2));
    CHECK(s(2, 1) == x(6, 3));
    CHECK(max_abs_diff(subsample(x, 1), x) == 0.0);
    CHECK_THROWS_AS(subsample(x, 0), std::invalid_argument);
}

TEST_CASE("conv_layer sums channels before subsampling") {
    MultiChannelMap X({oracle::random_map(16, 16, 1), oracle::random_map(16, 16, 2), oracle::random_map(16, 16, 3)});
    KernelTensor V(2);
    for (int l = 0; l < 2; ++l)
        for (int k = 0; k < 3; ++k)
            V[static_cast<std::size_t>(l)].push_back(
                with_origin(oracle::random_map(3, 3, static_cast<std::uint64_t>(10 * l + k)), {1, 1}));
    const auto Y = conv_layer(X, V, 2);
    REQUIRE(Y.channels() == 2);
    for (int l = 0; l < 2; ++l) {
        FeatureMap ref(8, 8);
        for (int k = 0; k < 3; ++k) {
            const FeatureMap part = oracle::correlate(X[k], V[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)], 2,
                                                      Boundary::Symmetric);
            for (std::size_t i = 0; i < ref.size(); ++i) ref.data()[i] += part.data()[i];
        }
        CHECK(max_abs_diff(Y[l], ref) < 1e-12);
    }
    KernelTensor ragged{{V[0][0], V[0][1]}};
    CHECK_THROWS(conv_layer(X, ragged, 2));
}

TEST_CASE("relu and bias") {
    FeatureMap y(1, 4);
    y(0, 0) = -2.0;
    y(0, 1) = -0.5;
    y(0, 2) = 0.0;
    y(0, 3) = 1.5;
    const FeatureMap r = relu(y);
    CHECK(r(0, 0) == 0.0);
    CHECK(r(0, 2) == 0.0);
    CHECK(r(0, 3) == 1.5);
    const FeatureMap rb = bias_relu(y, 1.0);
    CHECK(rb(0, 0) == 0.0);
    CHECK(rb(0, 1) == 0.5);
    CHECK(rb(0, 3) == 2.5);
}

TEST_CASE("max pooling") {
    const FeatureMap y = oracle::random_map(11, 10, 4);
    const FeatureMap p = max_pool(y);
    REQUIRE((p.rows() == 6 && p.cols() == 5));
    CHECK(max_abs_diff(p, oracle::max_pool(y)) == 0.0);

    // Periodic wraps the row above the first one.
    FeatureMap z(4, 4, 0.0);
    z(3, 0) = 5.0;
    CHECK(max_pool(z, Boundary::Periodic)(0, 0) == 5.0);
    CHECK(max_pool(z, Boundary::Symmetric)(0, 0) == 0.0);

    // Max pooling commutes with adding a constant.
    FeatureMap shifted = y;
    for (auto& v : shifted.data()) v += 3.0;
    const FeatureMap ps = max_pool(shifted);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(ps.data()[i] == doctest::Approx(p.data()[i] + 3.0));
}

TEST_CASE("modulus, rmax and cmod") {
    ComplexMap z(1, 3);
    z(0, 0) = {3.0, 4.0};
    z(0, 1) = {0.0, -2.0};
    const FeatureMap a = modulus(z);
    CHECK(a(0, 0) == doctest::Approx(5.0));
    CHECK(a(0, 1) == doctest::Approx(2.0));
    CHECK(a(0, 2) == 0.0);

    MultiChannelMap X({oracle::random_map(32, 32, 21)});
    KernelTensor V{{with_origin(oracle::random_map(5, 5, 22), {2, 2})}};
    const auto R = rmax(X, V, 2);
    CHECK(max_abs_diff(R[0], oracle::max_pool(oracle::correlate(X[0], V[0][0], 2, Boundary::Symmetric))) == 0.0);
    CHECK((R[0].rows() == 8 && R[0].cols() == 8));

    ComplexMap w = oracle::random_complex(5, 5, 23);
    w.set_origin({2, 2});
    ComplexKernelTensor W{{w}};
    const auto C = cmod(X, W, 2);
    const ComplexMap ref = oracle::correlate(X[0], w, 4, Boundary::Symmetric);
    REQUIRE((C[0].rows() == 8 && C[0].cols() == 8));
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) CHECK(C[0](r, c) == doctest::Approx(std::abs(ref(r, c))).epsilon(1e-12));
    CHECK_THROWS(cmod(X, W, 0));
}

TEST_CASE("binomial filters and blur pooling") {
    for (int size = 1; size <= 7; ++size) {
        const auto row = binomial_row(size);
        const auto ref = oracle::pascal(size);
        REQUIRE(row.size() == ref.size());
        for (std::size_t i = 0; i < row.size(); ++i) CHECK(row[i] == doctest::Approx(ref[i]).epsilon(1e-14));
    }
    CHECK_THROWS(binomial_row(0));

    const FeatureMap c(12, 12, 2.5);
    for (int size : {2, 3, 5}) {
        const FeatureMap b = blur_pool(c, size);
        REQUIRE((b.rows() == 6 && b.cols() == 6));
        for (double v : b.data()) CHECK(v == doctest::Approx(2.5));
    }

    const FeatureMap y = oracle::random_map(14, 14, 9);
    const auto row = oracle::pascal(3);
    FeatureMap k(3, 3);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) k(a, b) = row[static_cast<std::size_t>(a)] * row[static_cast<std::size_t>(b)];
    k.set_origin({1, 1});
    CHECK(max_abs_diff(blur_pool(y, 3, Boundary::Zero), oracle::correlate(y, k, 2, Boundary::Zero)) < 1e-14);
}

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "wavetwin/csv.hpp"
#include "wavetwin/metrics.hpp"
#include "wavetwin/probes.hpp"

using namespace wavetwin;

TEST_CASE("shift axes") {
    for (ShiftAxis a : {ShiftAxis::Horizontal, ShiftAxis::Vertical, ShiftAxis::Diagonal})
        CHECK(parse_shift_axis(to_string(a)) == a);
    CHECK_THROWS(parse_shift_axis("sideways"));
    CHECK(shift_vector(ShiftAxis::Horizontal, 1.5) == std::array<double, 2>{0.0, 1.5});
    CHECK(shift_vector(ShiftAxis::Vertical, 2.0) == std::array<double, 2>{2.0, 0.0});
    CHECK(shift_vector(ShiftAxis::Diagonal, 0.5) == std::array<double, 2>{0.5, 0.5});
}

TEST_CASE("shifted patches") {
    const FeatureMap img = oracle::random_map(20, 20, 1);
    const FeatureMap p = shifted_patch(img, {4, 5}, 8, 2.0, -1.0);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) CHECK(p(r, c) == img(6 + r, 4 + c));

    // Half-pixel shifts read the midpoint of the bilinear upsampling.
    const FeatureMap h = shifted_patch(img, {4, 4}, 6, 0.5, 0.0);
    for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 6; ++c) CHECK(h(r, c) == doctest::Approx(0.5 * (img(4 + r, 4 + c) + img(5 + r, 4 + c))));
    const FeatureMap d = shifted_patch(img, {4, 4}, 6, 0.5, 0.5);
    CHECK(d(0, 0) == doctest::Approx(0.25 * (img(4, 4) + img(4, 5) + img(5, 4) + img(5, 5))));

    // A linear ramp is reproduced exactly at half-pixel positions.
    FeatureMap ramp(16, 16);
    for (int r = 0; r < 16; ++r)
        for (int c = 0; c < 16; ++c) ramp(r, c) = 0.3 * r - 0.2 * c;
    const FeatureMap q = shifted_patch(ramp, {2, 2}, 8, 1.5, 2.5);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) CHECK(q(r, c) == doctest::Approx(0.3 * (3.5 + r) - 0.2 * (4.5 + c)));

    CHECK_THROWS(shifted_patch(img, {4, 4}, 8, 0.25, 0.0));
    CHECK_THROWS(shifted_patch(img, {4, 4}, 8, 9.0, 0.0));
    CHECK_THROWS(shifted_patch(img, {0, 0}, 8, -0.5, 0.0));

    ShiftProbe probe{ShiftAxis::Diagonal, {0.0, 0.5, 1.0, 3.0}, 10, {-1, -1}};
    const auto patches = extract_shifted_patches(img, probe);
    REQUIRE(patches.size() == 4);
    CHECK(patches[0](0, 0) == img(5, 5));
    CHECK(patches[3](0, 0) == img(8, 8));
    probe.shifts = {6.0};
    CHECK_THROWS(extract_shifted_patches(img, probe));
}

TEST_CASE("KL divergence") {
    const std::vector<double> p{0.5, 0.25, 0.25};
    const std::vector<double> q{0.25, 0.5, 0.25};
    CHECK(kl_divergence(p, p) == 0.0);
    const double want = 0.5 * std::log(2.0) + 0.25 * std::log(0.5);
    CHECK(kl_divergence(p, q) == doctest::Approx(want));
    CHECK(kl_divergence(p, q) >= 0.0);
    CHECK(kl_divergence({1.0, 0.0}, {0.0, 1.0}, 1e-12) == doctest::Approx(std::log(1e12)));
    CHECK(kl_divergence({0.0, 1.0}, {0.5, 0.5}) == doctest::Approx(std::log(2.0)));
    CHECK_THROWS(kl_divergence({0.5, 0.5}, {1.0}));
    CHECK_THROWS(kl_divergence({0.5, 0.6}, {0.5, 0.5}));
    CHECK_THROWS(kl_divergence({1.5, -0.5}, {0.5, 0.5}));
    CHECK_THROWS(kl_divergence({}, {}));
}

TEST_CASE("mean flip rate") {
    // 2 sequences x 3 shifts, 2 flips
    const std::vector<std::vector<int>> seqs{{3, 3, 4, 3}, {1, 1, 1, 2}};
    CHECK(mean_flip_rate(seqs) == doctest::Approx(2.0 / 6.0));
    CHECK(mean_flip_rate(seqs, 0.5) == doctest::Approx(4.0 / 6.0));
    CHECK(mean_flip_rate({{7, 7, 7}}) == 0.0);
    CHECK_THROWS(mean_flip_rate({{1}}));
    CHECK_THROWS(mean_flip_rate({}));
    CHECK_THROWS(mean_flip_rate(seqs, 0.0));
}

TEST_CASE("aligned distance") {
    const FeatureMap a = oracle::random_map(10, 10, 2);
    CHECK(aligned_distance(a, a, 0, 0, 0) == 0.0);
    FeatureMap moved(10, 10);
    for (int r = 0; r < 10; ++r)
        for (int c = 0; c < 10; ++c) moved(r, c) = a(r, (c + 2) % 10);
    CHECK(aligned_distance(moved, a, 0, 2, 0) == 0.0);
    CHECK(aligned_distance(moved, a, 0, 0, 0) > 0.1);

    FeatureMap twice = a;
    for (auto& v : twice.data()) v *= 2.0;
    CHECK(aligned_distance(twice, a, 0, 0, 1) == doctest::Approx(1.0));
    CHECK_THROWS(aligned_distance(a, FeatureMap(9, 10), 0, 0, 0));
    CHECK_THROWS(aligned_distance(a, a, 0, 0, 5));
}

TEST_CASE("feature consistency of a subsampling operator") {
    // Subsampling by 4 of a 4-periodic-in-content signal: whole-period shifts
    // are exact, other shifts are not.
    const std::vector<Sinusoid> terms{{0.0, std::numbers::pi / 8.0, 1.0, 0.2}};
    auto source = [&](double dy, double dx) { return render(terms, 32, 32, dy, dx); };
    const ShiftOperator op{"sub4", 4, 0, [](const FeatureMap& x) { return subsample(x, 4); }};
    const auto rep = feature_consistency(op, source, ShiftAxis::Horizontal, {1.0, 4.0, 8.0});
    REQUIRE(rep.distances.size() == 3);
    CHECK(rep.distances[0] > 0.05);
    CHECK(rep.distances[1] < 1e-12);
    CHECK(rep.distances[2] < 1e-12);
    CHECK(rep.op == "sub4");

    const std::string csv = consistency_csv({rep});
    CHECK(csv.rfind("shift_px,axis,operator,distance\r\n", 0) == 0);
    CHECK(csv.find("\r\n4,horizontal,sub4,") != std::string::npos);

    const ShiftOperator bad{"bad", 0, 0, op.apply};
    CHECK_THROWS(feature_consistency(bad, source, ShiftAxis::Horizontal, {1.0}));
}

TEST_CASE("rmax, cmod and blur operators") {
    const PacketBank b = build_packet_bank(load_filter_pair("qshift10"), 2);
    const int m = 2;
    const int k = b.index_of(1, 1, 1);
    const auto& w = b.kernels[static_cast<std::size_t>(k)];
    const FeatureMap x = oracle::random_map(64, 64, 3);
    const auto rm = make_rmax_operator(w, m, Boundary::Periodic);
    const auto cm = make_cmod_operator(w, m, Boundary::Periodic);
    const auto bl = make_blur_operator(w, m, 3, Boundary::Periodic);
    for (const ShiftOperator* op : {&rm, &cm, &bl}) {
        CHECK(op->period == 2 * m);
        const FeatureMap y = op->apply(x);
        CHECK((y.rows() == 16 && y.cols() == 16));
    }
    CHECK(max_abs_diff(cm.apply(x), modulus(oracle::correlate(x, w, 4, Boundary::Periodic))) < 1e-12);
    ComplexMap re = to_complex(real_part(w));
    re.set_origin(w.origin());
    const FeatureMap wrapped = max_pool(real_part(oracle::correlate(x, re, 2, Boundary::Periodic)), Boundary::Periodic);
    CHECK(max_abs_diff(rm.apply(x), wrapped) < 1e-12);

    // Periodic input: shifting by the output period changes nothing.
    auto source = [&](double dy, double dx) {
        FeatureMap out(64, 64);
        for (int r = 0; r < 64; ++r)
            for (int c = 0; c < 64; ++c)
                out(r, c) = x((r + static_cast<int>(dy) + 64) % 64, (c + static_cast<int>(dx) + 64) % 64);
        return out;
    };
    for (const ShiftOperator* op : {&rm, &cm, &bl}) {
        const auto rep = feature_consistency(*op, source, ShiftAxis::Diagonal, {4.0, 8.0});
        CHECK(rep.distances[0] < 1e-12);
        CHECK(rep.distances[1] < 1e-12);
    }
    CHECK_THROWS(make_blur_operator(w, m, 0, Boundary::Periodic));
}

TEST_CASE("in-band probe boxes") {
    PacketCell cell;
    cell.sigma = 1;
    cell.fy = 1;
    cell.fx = 2;
    const double w = std::numbers::pi / 4.0;
    auto box = in_band_box(cell, 2, 1.0);
    CHECK(box.lo[0] == doctest::Approx(w));
    CHECK(box.hi[0] == doctest::Approx(2 * w));
    CHECK(box.lo[1] == doctest::Approx(2 * w));
    CHECK(box.hi[1] == doctest::Approx(3 * w));
    box = in_band_box(cell, 2, 0.5);
    CHECK(box.lo[1] == doctest::Approx(2.25 * w));
    CHECK(box.hi[1] == doctest::Approx(2.75 * w));
    cell.sigma = -1;
    box = in_band_box(cell, 2, 1.0);
    CHECK(box.lo[0] == doctest::Approx(-2 * w));
    CHECK(box.hi[0] == doctest::Approx(-w));
    CHECK_THROWS(in_band_box(cell, 2, 0.0));
    CHECK_THROWS(in_band_box(cell, 2, 1.5));
}

TEST_CASE("probes") {
    const std::vector<Sinusoid> t{{0.3, -0.7, 2.0, 0.1}};
    const FeatureMap a = render(t, 8, 8, 0.5, -1.5);
    CHECK(a(2, 3) == doctest::Approx(2.0 * std::cos(-0.7 * 1.5 + 0.3 * 2.5 + 0.1)));

    const std::array<double, 2> lo{0.4, 1.0}, hi{0.8, 1.5};
    const auto terms = bandlimited_probe(lo, hi, 5, 9, 128);
    REQUIRE(terms.size() == 5);
    double power = 0.0;
    const double step = 2.0 * std::numbers::pi / 128.0;
    for (const auto& s : terms) {
        CHECK((s.wy >= lo[0] && s.wy <= hi[0]));
        CHECK((s.wx >= lo[1] && s.wx <= hi[1]));
        CHECK(std::abs(s.wx / step - std::round(s.wx / step)) < 1e-9);
        power += 0.5 * s.amplitude * s.amplitude;
    }
    CHECK(power == doctest::Approx(1.0));
    // snapped probes are periodic over the grid
    CHECK(max_abs_diff(render(terms, 16, 16, 128.0, 0.0), render(terms, 16, 16)) < 1e-9);

    const FeatureMap n = natural_like_image(64, 4);
    double mean = 0.0, var = 0.0;
    for (double v : n.data()) mean += v;
    mean /= static_cast<double>(n.size());
    for (double v : n.data()) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n.size());
    CHECK(mean == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(std::sqrt(var) == doctest::Approx(0.2).epsilon(1e-9));
    CHECK(max_abs_diff(natural_like_image(64, 4), n) == 0.0);
}

TEST_CASE("shift stability sweep on a small bank") {
    const PacketBank b = build_packet_bank(load_filter_pair("qshift10"), 1);
    StabilityOptions opt;
    opt.probes = 2;
    opt.image_size = 64;
    opt.shifts = {1.0, 2.0};
    opt.threads = 2;
    const auto res = shift_stability_sweep(b, opt);
    CHECK(res.m == 1);
    CHECK(res.cases.size() == static_cast<std::size_t>(b.halfplane_count()) * 2 * 2);
    CHECK(res.max_cmod_at_period < 1e-9);
    CHECK(res.max_rmax_at_period < 1e-9);
    const double wins = res.cmod_wins();
    CHECK((wins >= 0.0 && wins <= 1.0));
    CHECK(StabilityResult{}.cmod_wins() == 0.0);

    const auto again = shift_stability_sweep(b, opt);
    for (std::size_t i = 0; i < res.cases.size(); ++i) CHECK(again.cases[i].cmod == res.cases[i].cmod);

    opt.band_fraction = 0.0;
    CHECK_THROWS(shift_stability_sweep(b, opt));
    opt.band_fraction = 0.5;
    opt.probes = 0;
    CHECK_THROWS(shift_stability_sweep(b, opt));
}

TEST_CASE("csv helpers") {
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_escape("two\nlines") == "\"two\nlines\"");
    const double v = 0.1 + 0.2;
    CHECK(std::stod(csv_number(v)) == v);
    CsvTable t({"a", "b"});
    t.add_row({"1", "x,y"});
    CHECK(t.rows() == 1);
    CHECK(t.str() == "a,b\r\n1,\"x,y\"\r\n");
    CHECK_THROWS(t.add_row({"only one"}));
}

#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "wavetwin/costmodel.hpp"

using namespace wavetwin::cost;

TEST_CASE("names") {
    for (Arch a : {Arch::AlexNet, Arch::ResNet}) CHECK(parse_arch(to_string(a)) == a);
    for (Variant v : {Variant::Std, Variant::Blur, Variant::ABlur, Variant::CMod})
        CHECK(parse_variant(to_string(v)) == v);
    CHECK_THROWS_AS(parse_arch("vgg"), std::invalid_argument);
    CHECK_THROWS_AS(parse_variant("dense"), std::invalid_argument);
}

TEST_CASE("spec validation") {
    CHECK_NOTHROW(CostSpec::for_arch(Arch::AlexNet).validate());
    CHECK_NOTHROW(CostSpec::for_arch(Arch::ResNet).validate());
    CostSpec s = CostSpec::for_arch(Arch::ResNet);
    CHECK(s.m == 2);
    CHECK(s.m_filt == 7);
    CHECK(s.N_out == 112);
    s.m = 4;
    CHECK_THROWS(s.validate());
    s = CostSpec::for_arch(Arch::AlexNet, 220);
    CHECK_THROWS(s.validate());
    s = CostSpec::for_arch(Arch::AlexNet);
    s.L = 60;
    CHECK_THROWS(s.validate());
    s.L = 0;
    CHECK_THROWS(s.validate());
    OpCosts c;
    c.t_mod = 0.0;
    CHECK_THROWS(c.validate());
    CHECK_THROWS(pipeline_flops(Variant::Std, CostSpec::for_arch(Arch::AlexNet), c));
}

TEST_CASE("layer formulas") {
    const CostSpec s = CostSpec::for_arch(Arch::AlexNet).at(10);
    const OpCosts c;
    // 3 * 11 * 11 = 363 products, 362 sums per output
    CHECK(flops_conv(s, c) == 100.0 * (362.0 + 363.0));
    CHECK(flops_cconv(s, c) == 2.0 * flops_conv(s, c));
    CHECK(flops_bias(s, c) == 100.0);
    CHECK(flops_relu(s, c) == 75.0);
    CHECK(flops_maxpool(s, c) == 1200.0);
    CHECK(flops_modulus(s, c) == 350.0);
    CHECK(flops_bn(s, c) == 700.0);
    CHECK(flops_bn0(s, c) == 400.0);
    CHECK(flops_blur(s, c) == 100.0 * 17.0);

    OpCosts unit{1, 1, 1, 1, 1, 1};
    CHECK(flops_relu(s, unit) == 100.0);
}

TEST_CASE("adaptive blur: stages, closed form, growth") {
    const CostSpec s = CostSpec::for_arch(Arch::ResNet).at(56);
    const OpCosts c;
    const auto st = flops_ablur_stages(s, c);
    CHECK(flops_ablur(s, c) == doctest::Approx(st[0] + st[1] + st[2] + st[3]));
    // The closed form also scales the last blur by m_bl^2 / L_group.
    const double g = 9.0 / 8.0;
    CHECK(flops_ablur_closed_form(s, c) - flops_ablur(s, c) == doctest::Approx((g - 1.0) * flops_blur(s, c)));

    // The generating conv dominates and grows with L m_bl^2; total is quartic in m_bl.
    CostSpec big = s;
    big.m_bl = 6;
    big.L_group = 8;
    const double ratio = flops_ablur_stages(big, c)[0] / st[0];
    CHECK(ratio == doctest::Approx(16.0).epsilon(0.01));
}

TEST_CASE("flops scale with the output area") {
    for (Arch a : {Arch::AlexNet, Arch::ResNet})
        for (Variant v : {Variant::Std, Variant::Blur, Variant::CMod}) {
            const double f1 = pipeline_flops(v, CostSpec::for_arch(a, 224));
            const double f2 = pipeline_flops(v, CostSpec::for_arch(a, 448));
            CHECK(f2 / f1 == doctest::Approx(4.0));
        }
}

TEST_CASE("pipeline breakdowns") {
    const auto p = pipeline_breakdown(Variant::CMod, CostSpec::for_arch(Arch::ResNet));
    REQUIRE(p.terms.size() == 5);
    CHECK(p.terms[0].layer == "cconv");
    CHECK(p.terms[0].n_out == 56);
    CHECK(p.terms[2].layer == "bn0");
    double sum = 0.0;
    for (const auto& t : p.terms) sum += t.flops;
    CHECK(sum == p.total);

    const auto blur = pipeline_breakdown(Variant::Blur, CostSpec::for_arch(Arch::AlexNet));
    CHECK(blur.terms.front().n_out == 112);
    CHECK(blur.terms.back().n_out == 28);
    CHECK_THROWS(pipeline_breakdown(Variant::ABlur, CostSpec::for_arch(Arch::AlexNet)));
}

TEST_CASE("memory table equals the closed form") {
    for (Arch a : {Arch::AlexNet, Arch::ResNet})
        for (Variant v : {Variant::Std, Variant::Blur, Variant::ABlur, Variant::CMod}) {
            if (a == Arch::AlexNet && v == Variant::ABlur) {
                CHECK_THROWS(memory_table(v, CostSpec::for_arch(a)));
                CHECK_THROWS(mem_closed_form(v, CostSpec::for_arch(a)));
                continue;
            }
            for (int N : {224, 448}) {
                const CostSpec s = CostSpec::for_arch(a, N);
                CHECK(mem_footprint(v, s) == mem_closed_form(v, s));
            }
        }
    const auto t = memory_table(Variant::CMod, CostSpec::for_arch(Arch::ResNet));
    CHECK(t.front().size() == 2.0 * 56 * 56);
    CHECK(MemoryItem{"metrics", 4, 0}.size() == 4.0);
}

TEST_CASE("published ratios are reproduced") {
    const auto rows = table4();
    CHECK(rows.size() == 5);
    for (const auto& chk : check_table4(rows)) {
        CAPTURE(to_string(chk.row.method));
        CAPTURE(to_string(chk.row.arch));
        CHECK(chk.flops_ok);
        CHECK(chk.mem_ok);
    }
    CHECK_THROWS(check_table4({}));
    const std::string csv = table4_csv(rows);
    CHECK(csv.rfind("method,arch,flops_ratio,mem_ratio\r\n", 0) == 0);
    CHECK(csv.find("cmod,resnet,") != std::string::npos);
}

TEST_CASE("cmod is the cheapest variant for both networks") {
    for (const auto& r : table4())
        if (r.method == Variant::CMod) {
            CHECK(r.flops_ratio < 1.0);
            CHECK(r.mem_ratio < 1.0);
        } else {
            CHECK(r.flops_ratio > 1.0);
            CHECK(r.mem_ratio > 1.0);
        }
}

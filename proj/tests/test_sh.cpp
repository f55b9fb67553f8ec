#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "rgs/sh.hpp"
#include "test_util.hpp"

using namespace rgs;

TEST_CASE("sh: zero coefficients give the 0.5 offset") {
    GaussianPrimitive g;
    g.band_count = 3;
    g.sh_rest.assign(45, 0.0f);
    g.base_color = Vec3::Zero();
    const Vec3 c = eval_sh_color(g, Vec3(0, 0, 1), 3);
    CHECK(c[0] == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(c[1] == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(c[2] == doctest::Approx(0.5).epsilon(1e-7));
}

TEST_CASE("sh: dc linearity in the red channel") {
    GaussianPrimitive g;
    g.band_count = 0;
    g.base_color = Vec3(0.5f / kShC0, 0.0f, 0.0f);
    const Vec3 c = eval_sh_color(g, Vec3(1, 0, 0).normalized(), 0);
    CHECK(c[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(c[1] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(c[2] == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("sh: matches the polynomial-basis oracle for random degree-3 coefficients") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<float> unit(-1.0f, 1.0f);
    for (int trial = 0; trial < 50; ++trial) {
        const GaussianPrimitive g = testutil::random_primitive(rng, 3);
        Vec3 dir(unit(rng), unit(rng), unit(rng));
        if (dir.norm() < 1e-3f)
            dir = Vec3(0, 0, 1);
        dir.normalize();
        for (const Vec3& d : {dir, Vec3(-dir)}) { // antipodal pair
            for (int q = 0; q <= 3; ++q) {
                const Vec3 ours = eval_sh_color(g, d, q);
                const Vec3 ref = oracle::sh_color(g, d, q);
                for (int ch = 0; ch < 3; ++ch)
                    CHECK(ours[ch] == doctest::Approx(ref[ch]).epsilon(0).scale(1).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("sh: evaluation is linear in the coefficients") {
    std::mt19937_64 rng(12);
    const GaussianPrimitive a = testutil::random_primitive(rng, 3);
    GaussianPrimitive b = a;
    GaussianPrimitive sum = a;
    std::mt19937_64 rng2(13);
    const GaussianPrimitive other = testutil::random_primitive(rng2, 3);
    b.base_color = other.base_color;
    b.sh_rest = other.sh_rest;
    sum.base_color = a.base_color + b.base_color;
    for (std::size_t i = 0; i < sum.sh_rest.size(); ++i)
        sum.sh_rest[i] = a.sh_rest[i] + b.sh_rest[i];

    const Vec3 dir = Vec3(0.3f, -0.8f, 0.5f).normalized();
    // the 0.5 offset appears once per evaluation
    const Vec3 lhs = eval_sh_color(sum, dir, 3);
    const Vec3 rhs = eval_sh_color(a, dir, 3) + eval_sh_color(b, dir, 3) - Vec3::Constant(0.5f);
    for (int ch = 0; ch < 3; ++ch)
        CHECK(lhs[ch] == doctest::Approx(rhs[ch]).epsilon(1e-5));
}

TEST_CASE("sh: progressive truncations agree with per-q evaluation") {
    std::mt19937_64 rng(14);
    const GaussianPrimitive g = testutil::random_primitive(rng, 3);
    const Vec3 dir = Vec3(-0.2f, 0.4f, 0.9f).normalized();
    const auto all = eval_sh_color_progressive(g, dir);
    for (int q = 0; q <= 3; ++q) {
        const Vec3 direct = eval_sh_color(g, dir, q);
        for (int ch = 0; ch < 3; ++ch)
            CHECK(all[static_cast<std::size_t>(q)][ch] == doctest::Approx(direct[ch]));
    }
}

TEST_CASE("sh: display clamp floors negative values at zero") {
    GaussianPrimitive g;
    g.band_count = 0;
    g.base_color = Vec3(-10.0f, 0.0f, 0.0f);
    const Vec3 raw = eval_sh_color(g, Vec3(0, 0, 1), 0, false);
    const Vec3 clamped = eval_sh_color(g, Vec3(0, 0, 1), 0, true);
    CHECK(raw[0] < 0.0f);
    CHECK(clamped[0] == 0.0f);
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "rgs/half.hpp"

using namespace rgs;

TEST_CASE("half: exactly representable values") {
    CHECK(float_to_half(1.0f) == 0x3C00);
    CHECK(half_to_float(0x3C00) == 1.0f);
    CHECK(float_to_half(0.0f) == 0x0000);
    CHECK(float_to_half(-0.0f) == 0x8000);
    CHECK(float_to_half(-2.0f) == 0xC000);
    CHECK(half_to_float(float_to_half(0.5f)) == 0.5f);
    CHECK(half_to_float(float_to_half(65504.0f)) == 65504.0f);
}

TEST_CASE("half: overflow and special values") {
    CHECK(half_to_float(float_to_half(65520.0f)) == std::numeric_limits<float>::infinity());
    CHECK(half_to_float(float_to_half(1e20f)) == std::numeric_limits<float>::infinity());
    CHECK(half_to_float(float_to_half(-1e20f)) == -std::numeric_limits<float>::infinity());
    CHECK(std::isnan(half_to_float(float_to_half(std::nanf("")))));
    // values below the subnormal range flush to zero
    CHECK(half_to_float(float_to_half(1e-9f)) == 0.0f);
}

TEST_CASE("half: round to nearest even at midpoints") {
    // 2048 + 1 is exactly between representable halves 2048 and 2050
    CHECK(half_to_float(float_to_half(2049.0f)) == 2048.0f);
    CHECK(half_to_float(float_to_half(2051.0f)) == 2052.0f);
}

TEST_CASE("half: round-trip relative error within 2^-11 on normal range") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<float> exponent(-14.0f, 15.0f);
    std::uniform_real_distribution<float> mantissa(1.0f, 2.0f);
    for (int i = 0; i < 20000; ++i) {
        const float sign = (i & 1) ? -1.0f : 1.0f;
        const float v = sign * mantissa(rng) * std::exp2(exponent(rng));
        const float back = half_to_float(float_to_half(v));
        CHECK(std::abs(back - v) / std::abs(v) <= std::exp2(-11.0f));
    }
}

TEST_CASE("half: 0.1 round trip within precision bound") {
    const float back = half_to_float(float_to_half(0.1f));
    CHECK(std::abs(back - 0.1f) / 0.1f <= std::exp2(-11.0f));
}

TEST_CASE("half: conversion is value-faithful over all 16-bit patterns") {
    // widening then narrowing any finite half is the identity
    for (std::uint32_t bits = 0; bits < 0x10000; ++bits) {
        const auto h = static_cast<std::uint16_t>(bits);
        const float f = half_to_float(h);
        if (std::isnan(f))
            continue;
        CHECK(float_to_half(f) == h);
    }
}

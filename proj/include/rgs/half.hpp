#pragma once

#include <bit>
#include <cstdint>

namespace rgs {

// IEEE 754 binary16 conversions, round to nearest even. Subnormals, infinities
// and NaN payload truncation follow the standard; relative round-trip error is
// at most 2^-11 for values in the binary16 normal range.

inline std::uint16_t float_to_half(float value) {
    const std::uint32_t f = std::bit_cast<std::uint32_t>(value);
    const std::uint32_t sign = (f >> 16) & 0x8000u;
    const std::uint32_t exp = (f >> 23) & 0xffu;
    std::uint32_t mant = f & 0x7fffffu;

    if (exp == 0xffu) // inf / NaN (keep a nonzero mantissa for NaN)
        return static_cast<std::uint16_t>(sign | 0x7c00u | (mant ? 0x200u | (mant >> 13) : 0u));

    const int e = static_cast<int>(exp) - 127 + 15;
    if (e >= 0x1f)
        return static_cast<std::uint16_t>(sign | 0x7c00u);

    if (e <= 0) {
        if (e < -10)
            return static_cast<std::uint16_t>(sign);
        mant |= 0x800000u;
        const int shift = 14 - e;
        const std::uint32_t out = mant >> shift;
        const std::uint32_t rest = mant & ((1u << shift) - 1u);
        const std::uint32_t halfway = 1u << (shift - 1);
        std::uint32_t rounded = out;
        if (rest > halfway || (rest == halfway && (out & 1u)))
            ++rounded;
        return static_cast<std::uint16_t>(sign | rounded);
    }

    std::uint32_t out = (static_cast<std::uint32_t>(e) << 10) | (mant >> 13);
    const std::uint32_t rest = mant & 0x1fffu;
    if (rest > 0x1000u || (rest == 0x1000u && (out & 1u)))
        ++out; // carry may roll into the exponent, which rounds up correctly
    return static_cast<std::uint16_t>(sign | out);
}

inline float half_to_float(std::uint16_t bits) {
    const std::uint32_t sign = (static_cast<std::uint32_t>(bits) & 0x8000u) << 16;
    const std::uint32_t exp = (bits >> 10) & 0x1fu;
    std::uint32_t mant = bits & 0x3ffu;
    std::uint32_t f;
    if (exp == 0) {
        if (mant == 0) {
            f = sign;
        } else {
            int shifts = 0;
            while (!(mant & 0x400u)) {
                mant <<= 1;
                ++shifts;
            }
            mant &= 0x3ffu;
            f = sign | (static_cast<std::uint32_t>(127 - 15 - shifts) << 23) | (mant << 13);
        }
    } else if (exp == 0x1f) {
        f = sign | 0x7f800000u | (mant << 13);
    } else {
        f = sign | ((exp - 15 + 127) << 23) | (mant << 13);
    }
    return std::bit_cast<float>(f);
}

inline float half_round(float value) { return half_to_float(float_to_half(value)); }

} // namespace rgs

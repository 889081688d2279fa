// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <bit>
#include <cstdint>

namespace hetpar {

// IEEE 754 binary16 <-> binary32 conversion, no hardware support required.
// Encoding rounds to nearest even; decoding is exact.

inline float fp16_to_fp32(std::uint16_t h) {
    const std::uint32_t sign = static_cast<std::uint32_t>(h & 0x8000u) << 16;
    const std::uint32_t exp = (h >> 10) & 0x1Fu;
    std::uint32_t mant = h & 0x3FFu;

    std::uint32_t bits;
    if (exp == 0) {
        if (mant == 0) {
            bits = sign;  // +-0
        } else {
            // subnormal: renormalize
            int shift = 0;
            while ((mant & 0x400u) == 0) {
                mant <<= 1;
                ++shift;
            }
            mant &= 0x3FFu;
            bits = sign | ((112u - shift) << 23) | (mant << 13);
        }
    } else if (exp == 0x1Fu) {
        bits = sign | 0x7F800000u | (mant << 13);  // inf/nan
    } else {
        bits = sign | ((exp + 112u) << 23) | (mant << 13);
    }
    return std::bit_cast<float>(bits);
}

inline std::uint16_t fp32_to_fp16(float f) {
    const std::uint32_t bits = std::bit_cast<std::uint32_t>(f);
    const std::uint16_t sign = static_cast<std::uint16_t>((bits >> 16) & 0x8000u);
    const std::uint32_t abs = bits & 0x7FFFFFFFu;

    if (abs >= 0x7F800000u) {  // inf/nan
        const std::uint16_t mant = abs > 0x7F800000u ? 0x200u : 0u;
        return static_cast<std::uint16_t>(sign | 0x7C00u | mant);
    }
    if (abs >= 0x47800000u) {  // overflows to inf (>= 65536)
        return static_cast<std::uint16_t>(sign | 0x7C00u);
    }
    if (abs < 0x38800000u) {  // subnormal or zero in fp16
        if (abs < 0x33000000u) {
            return sign;  // rounds to +-0
        }
        const int shift = 126 - static_cast<int>(abs >> 23);
        std::uint32_t mant = (abs & 0x7FFFFFu) | 0x800000u;
        // round to nearest even at bit (shift + 13)
        const std::uint32_t half = 1u << (shift + 12);
        const std::uint32_t rest = mant & ((half << 1) - 1);
        mant >>= (shift + 13);
        if (rest > half || (rest == half && (mant & 1u))) {
            ++mant;
        }
        return static_cast<std::uint16_t>(sign | mant);
    }
    // normal range
    std::uint32_t exp = (abs >> 23) - 112u;
    std::uint32_t mant = abs & 0x7FFFFFu;
    const std::uint32_t rest = mant & 0x1FFFu;
    mant >>= 13;
    std::uint16_t out = static_cast<std::uint16_t>((exp << 10) | mant);
    if (rest > 0x1000u || (rest == 0x1000u && (out & 1u))) {
        ++out;  // may carry into the exponent, which is the correct result
    }
    return static_cast<std::uint16_t>(sign | out);
}

}  // namespace hetpar

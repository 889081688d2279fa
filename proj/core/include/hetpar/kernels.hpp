// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <vector>

namespace hetpar {

inline constexpr std::size_t kQuantGroupSize = 32;
inline constexpr std::size_t kQ40BlockBytes = 18;  // fp16 scale + 16 packed bytes

// Unsigned-activation, signed-weight integer GEMM. C[m][n] = sum_k A[m][k] *
// B[k][n], accumulated in 32 bits (exact for K <= 2^16). All matrices are
// row-major and densely packed.
struct I8GemmProblem {
    std::size_t m = 0, n = 0, k = 0;
    const std::uint8_t* a = nullptr;  // m x k
    const std::int8_t* b = nullptr;   // k x n
    std::int32_t* c = nullptr;        // m x n
};

// Computes output columns [col_begin, col_end). Disjoint column slices write
// disjoint memory, so any cover of [0, n) reproduces the full product exactly.
void gemm_i8_range(const I8GemmProblem& p, std::size_t col_begin, std::size_t col_end);

// Block-quantized weight matrix in the Q4_0 layout: per 32-column group, one
// half-precision scale d followed by 16 bytes of 4-bit codes. Byte j packs
// element j in the low nibble and element j+16 in the high nibble, each
// stored as value+8 in [0,15]. Dequantized value = d * (q - 8). Blocks are
// row-major, groups left to right, 18 bytes each.
struct Q40Weight {
    std::size_t rows = 0;
    std::size_t cols = 0;  // multiple of 32
    std::vector<std::uint8_t> blocks;

    std::size_t groups_per_row() const { return cols / kQuantGroupSize; }
    const std::uint8_t* block(std::size_t row, std::size_t group) const {
        return blocks.data() + (row * groups_per_row() + group) * kQ40BlockBytes;
    }
    std::uint8_t* block(std::size_t row, std::size_t group) {
        return blocks.data() + (row * groups_per_row() + group) * kQ40BlockBytes;
    }
};

// Per group: d = max|w| / 8 (d = 0 -> all codes 8), code = clamp(round(w/d) + 8,
// 0, 15) with rounding half away from zero. Codes are computed against the
// scale as stored in fp16. Throws std::invalid_argument unless cols % 32 == 0.
Q40Weight quantize_q40(const float* w, std::size_t rows, std::size_t cols);
std::vector<float> dequantize_q40(const Q40Weight& q);

// Dynamically quantized activation vector: per 32-element group, 32 signed
// 8-bit codes and one single-precision scale s = max|x| / 127 (s = 0 -> all
// codes 0), code = round-half-away-from-zero(x/s) clamped to [-127, 127].
struct Q8Activation {
    std::size_t length = 0;  // multiple of 32
    std::vector<std::int8_t> codes;
    std::vector<float> scales;  // one per group
};

Q8Activation quantize_q8(std::span<const float> x);

// y[r] = sum over groups of d_rg * s_g * (integer dot of the group's codes),
// for rows [row_begin, row_end). Group dot products are exact in 32-bit
// integers; the per-group scale products accumulate in 32-bit float.
void gemv_q40_range(const Q40Weight& w, const Q8Activation& x, float* y,
                    std::size_t row_begin, std::size_t row_end);

// Plain tensor copy over an element range; src and dst must not overlap.
template <typename T>
inline void copy_range(const T* src, T* dst, std::size_t begin, std::size_t end) {
    if (end > begin) {
        std::memcpy(dst + begin, src + begin, (end - begin) * sizeof(T));
    }
}

}  // namespace hetpar

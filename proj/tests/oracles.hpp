// SPDX-License-Identifier: Apache-2.0
//
// Independent brute-force oracles used only by tests. These deliberately
// avoid the algebraic simplifications and quantization shortcuts of the
// library implementations they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "hetpar/fp16.hpp"
#include "hetpar/kernels.hpp"

namespace hetpar::test {

// Literal summation form of the ratio update: pr_i' = pr_i / sum_j(t_i * pr_j / t_j)
// over participating cores, then rescaled to participant mean 1.
// Non-participants keep their prior ratio.
inline std::vector<double> eq2_literal(const std::vector<double>& pr,
                                       const std::vector<double>& t,
                                       const std::vector<std::uint64_t>& units) {
    const std::size_t n = pr.size();
    std::vector<std::size_t> part;
    for (std::size_t i = 0; i < n; ++i) {
        if (units[i] > 0) part.push_back(i);
    }
    std::vector<double> out = pr;
    for (std::size_t i : part) {
        double denom = 0.0;
        for (std::size_t j : part) {
            denom += t[i] * pr[j] / t[j];
        }
        out[i] = pr[i] / denom;
    }
    double mean = 0.0;
    for (std::size_t i : part) mean += out[i];
    mean /= static_cast<double>(part.size());
    for (std::size_t i : part) out[i] /= mean;
    return out;
}

// Naive triple-loop integer GEMM in the widest integer type.
inline std::vector<std::int64_t> gemm_oracle(const std::vector<std::uint8_t>& a,
                                             const std::vector<std::int8_t>& b,
                                             std::size_t m, std::size_t n, std::size_t k) {
    std::vector<std::int64_t> c(m * n, 0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            std::int64_t acc = 0;
            for (std::size_t p = 0; p < k; ++p) {
                acc += static_cast<std::int64_t>(a[i * k + p]) *
                       static_cast<std::int64_t>(b[p * n + j]);
            }
            c[i * n + j] = acc;
        }
    }
    return c;
}

// Double-precision GEMV over fully dequantized operands.
inline std::vector<double> gemv_oracle_f64(const Q40Weight& w, const Q8Activation& x) {
    std::vector<double> y(w.rows, 0.0);
    const std::size_t groups = w.groups_per_row();
    for (std::size_t r = 0; r < w.rows; ++r) {
        double acc = 0.0;
        for (std::size_t g = 0; g < groups; ++g) {
            const std::uint8_t* blk = w.block(r, g);
            const double d = fp16_to_fp32(
                static_cast<std::uint16_t>(blk[0] | (blk[1] << 8)));
            for (std::size_t j = 0; j < kQuantGroupSize; ++j) {
                const std::uint8_t byte = blk[2 + (j % 16)];
                const int q = (j < 16) ? (byte & 0x0F) : (byte >> 4);
                const double wv = d * (q - 8);
                const double xv = static_cast<double>(x.scales[g]) *
                                  static_cast<double>(x.codes[g * kQuantGroupSize + j]);
                acc += wv * xv;
            }
        }
        y[r] = acc;
    }
    return y;
}

// Smallest achievable max deviation from the ideal quotas theta_i * s over
// all integer allocations summing to s (exhaustive, tiny instances only).
inline double min_max_deviation(std::uint64_t s, const std::vector<double>& ratios) {
    const std::size_t n = ratios.size();
    double sum = 0.0;
    for (double r : ratios) sum += r;
    std::vector<double> quota(n);
    for (std::size_t i = 0; i < n; ++i) quota[i] = ratios[i] / sum * static_cast<double>(s);

    double best = std::numeric_limits<double>::infinity();
    std::vector<std::uint64_t> alloc(n, 0);
    auto recurse = [&](auto&& self, std::size_t idx, std::uint64_t left) -> void {
        if (idx + 1 == n) {
            alloc[idx] = left;
            double dev = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                dev = std::max(dev, std::abs(static_cast<double>(alloc[i]) - quota[i]));
            }
            best = std::min(best, dev);
            return;
        }
        for (std::uint64_t v = 0; v <= left; ++v) {
            alloc[idx] = v;
            self(self, idx + 1, left - v);
        }
    };
    recurse(recurse, 0, s);
    return best;
}

}  // namespace hetpar::test

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

namespace hetpar {

// Label grouping kernels that share one dominant instruction mix. Each class
// owns an independent per-core ratio vector in the PerformanceTable.
struct KernelClass {
    std::string id;

    explicit KernelClass(std::string label);

    bool operator==(const KernelClass&) const = default;
};

// Per-core wall-clock result of one parallel kernel launch. A core that was
// assigned zero units has elapsed recorded as zero and does not participate
// in ratio updates.
struct TaskTiming {
    std::vector<double> per_core_elapsed;       // seconds, monotonic clock
    std::vector<std::uint64_t> per_core_units;  // work units assigned

    std::size_t n_cores() const { return per_core_elapsed.size(); }
};

// Elapsed values at or below this are treated as clock noise; the whole
// update round is skipped rather than folding an extreme ratio into the table.
inline constexpr double kClockEpsilon = 1e-9;

// Lower bound applied to each ratio after filtering, so a transient stall
// cannot permanently starve a core of work (and thus of timing signal).
inline constexpr double kRatioFloor = 0.01;

// One ratio-update step, as a pure function. For each participating core
// (units > 0) the new ratio is proportional to its measured speed pr_i / t_i,
// rescaled so the mean over participants is 1. Non-participating cores keep
// their prior ratio.
//
// Throws DegenerateTimingError if any participating elapsed <= kClockEpsilon,
// std::invalid_argument on size mismatch, non-positive ratios, or fewer than
// two participating cores.
std::vector<double> raw_update(std::span<const double> ratios, const TaskTiming& timing);

// Per-kernel-class table of relative per-core performance ratios.
//
// Every stored vector has length n_cores, strictly positive entries, and mean
// 1 after every operation. Unseen classes materialize lazily as the all-ones
// vector (any positive initial_ratio normalizes to 1).
//
// Concurrency: single writer (update), any number of concurrent readers
// (ratios). Updates are serialized by the owning scheduler between launches.
class PerformanceTable {
public:
    PerformanceTable(std::size_t n_cores, double alpha, double initial_ratio = 1.0);

    std::size_t n_cores() const { return n_cores_; }
    double alpha() const { return alpha_; }
    double initial_ratio() const { return initial_ratio_; }

    // Current ratio vector for a class, materializing the default if unseen.
    std::vector<double> ratios(const KernelClass& cls) const;

    // Filtered update: blends the raw update with the stored vector using the
    // constant filter gain, pr_i <- alpha * pr_i + (1 - alpha) * pr_i', then
    // clamps to kRatioFloor and re-normalizes the full vector to mean 1.
    // Returns the stored vector. On DegenerateTimingError the stored vector
    // is unchanged.
    std::vector<double> update(const KernelClass& cls, const TaskTiming& timing);

private:
    std::vector<double>& materialize(const KernelClass& cls) const;

    std::size_t n_cores_;
    double alpha_;
    double initial_ratio_;
    mutable std::shared_mutex mutex_;
    mutable std::unordered_map<std::string, std::vector<double>> table_;
};

// Ratio-trace serialization used by the bench CLI's trace experiment.
// Columns: iteration, kernel_class, core_0..core_{n-1} (6 decimal places).
void write_trace_header(std::ostream& os, std::size_t n_cores);
void write_trace_row(std::ostream& os, std::uint64_t iteration, const KernelClass& cls,
                     std::span<const double> ratios);

}  // namespace hetpar

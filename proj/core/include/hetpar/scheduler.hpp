// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hetpar/emulation.hpp"
#include "hetpar/perf_table.hpp"
#include "hetpar/thread_pool.hpp"

namespace hetpar {

// Partition of a kernel's parallel dimension into per-core contiguous
// sub-ranges. partitions[i] is the unit count of core i; the ranges follow in
// core-index order. Every partition is a multiple of the granularity except
// possibly the last nonzero one, which absorbs the remainder.
struct SplitPlan {
    std::uint64_t total_units = 0;
    std::uint64_t granularity = 1;
    std::vector<std::uint64_t> partitions;

    // Half-open unit range of core i.
    std::pair<std::uint64_t, std::uint64_t> range(std::size_t core_index) const;
};

// Proportional split: core i targets ratios[i] / sum(ratios) of total_units,
// quantized to granularity-sized chunks by the largest-remainder method
// (descending fractional remainder, ties to the lower core index). The final
// chunk may be smaller than the granularity. When total_units < n * g the
// available chunks go to the highest-ratio cores and the rest get zero.
SplitPlan split(std::uint64_t total_units, std::span<const double> ratios,
                std::uint64_t granularity);

// Equal-ratio split; the static baseline used for benchmark comparisons.
SplitPlan static_equal_split(std::uint64_t total_units, std::size_t n_cores,
                             std::uint64_t granularity);

// A kernel expressed as partitionable work over an output dimension, plus the
// unit multiple its micro-kernel tiles require.
struct RangeKernel {
    KernelClass cls;
    std::uint64_t granularity = 1;
    RangeWork run;
};

struct KernelLaunchReport {
    KernelClass cls;
    SplitPlan plan;
    TaskTiming timing;
    std::vector<double> ratios_after;
    double makespan_s = 0.0;     // max over per-core elapsed
    bool update_skipped = false; // update requested but gated or degenerate

    // {class, total_units, partitions[], elapsed_s[], makespan_s, ratios_after[]}
    std::string to_json() const;
};

// Per-launch lifecycle: query ratios -> split -> execute -> feed timings back
// into the performance table. The scheduler is the only writer of its table;
// launches are serialized.
class Scheduler {
public:
    Scheduler(ThreadPool& pool, PerformanceTable& table);

    // Emulated heterogeneity. Snapshots are installed between launches only.
    void set_core_profile(CoreProfile profile);
    void clear_core_profile();
    const std::optional<CoreProfile>& core_profile() const { return profile_; }

    // Dynamic launch. When update is false the table is untouched
    // (measurement-only mode for baselines). Rounds where fewer than two
    // cores received work, or where any timing was degenerate, skip the
    // table update and set update_skipped.
    KernelLaunchReport run_kernel(const RangeKernel& kernel, std::uint64_t total_units,
                                  bool update = true);

    // Launch with a caller-provided plan (e.g. the static equal split).
    KernelLaunchReport run_with_plan(const RangeKernel& kernel, SplitPlan plan,
                                     bool update);

    ThreadPool& pool() { return *pool_; }
    PerformanceTable& table() { return *table_; }

private:
    ThreadPool* pool_;
    PerformanceTable* table_;
    std::optional<CoreProfile> profile_;
};

}  // namespace hetpar

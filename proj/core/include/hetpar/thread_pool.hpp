// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <string_view>
#include <thread>
#include <vector>

#include "hetpar/perf_table.hpp"

namespace hetpar {

// Ordered list of distinct logical core ids. The position in the list defines
// the core index used by the scheduler, the performance table and TaskTiming.
struct CoreSet {
    std::vector<int> core_ids;

    explicit CoreSet(std::vector<int> ids);

    std::size_t size() const { return core_ids.size(); }

    // Parses "0,1,2,3".
    static CoreSet parse(std::string_view csv);
    // First n online cores, [0 .. hardware_concurrency).
    static CoreSet detect();
    // HETPAR_CORES environment variable, if set.
    static std::optional<CoreSet> from_env();
};

enum class PinningMode {
    kStrict,      // failure to pin any worker is an error
    kBestEffort,  // failures are recorded in the pool metadata
    kOff,         // no affinity calls
};

// Work over a half-open range of work units, executed on one worker.
using RangeWork = std::function<void(std::uint64_t begin, std::uint64_t end)>;

struct SubTask {
    std::size_t core_index = 0;
    std::uint64_t begin = 0;
    std::uint64_t end = 0;  // empty ranges are legal no-ops
    RangeWork work;
};

struct PoolMetadata {
    PinningMode mode = PinningMode::kOff;
    std::vector<bool> pinned;  // per worker; all false under kOff

    bool all_pinned() const;
};

// One OS thread per managed core, each pinned to its core (subject to the
// pinning mode). Workers park on a condition variable between launches, with
// a short spin window before sleeping to keep dispatch latency low.
//
// The handle is used from one coordinating thread at a time; launches are
// serialized. Per-core elapsed time is measured on the worker itself with a
// monotonic clock and covers only the work callable, not dispatch latency.
class ThreadPool {
public:
    ThreadPool(CoreSet cores, PinningMode mode);
    ~ThreadPool();

    ThreadPool(const ThreadPool&) = delete;
    ThreadPool& operator=(const ThreadPool&) = delete;

    std::size_t size() const { return cores_.size(); }
    const CoreSet& cores() const { return cores_; }
    const PoolMetadata& metadata() const { return metadata_; }

    // Runs all sub-tasks concurrently on their designated workers and returns
    // once every one has finished. At most one sub-task per core index.
    // A worker exception surfaces as TaskFailedError; the pool stays usable.
    TaskTiming execute(std::span<const SubTask> subtasks);

    // Joins all workers. Idempotent; subsequent execute throws PoolClosedError.
    void shutdown();
    bool closed() const { return closed_.load(std::memory_order_acquire); }

private:
    struct Slot {
        RangeWork work;  // empty: no task this launch
        std::uint64_t begin = 0;
        std::uint64_t end = 0;
        double elapsed_s = 0.0;
        std::exception_ptr error;
    };

    void worker_main(std::size_t index);

    CoreSet cores_;
    PoolMetadata metadata_;
    std::vector<Slot> slots_;
    std::vector<std::thread> workers_;

    std::mutex mutex_;
    std::condition_variable launch_cv_;
    std::condition_variable done_cv_;
    std::atomic<std::uint64_t> generation_{0};
    std::size_t remaining_ = 0;
    std::atomic<bool> stop_{false};
    std::atomic<bool> closed_{false};
};

}  // namespace hetpar

// SPDX-License-Identifier: Apache-2.0
#include "hetpar/thread_pool.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <latch>
#include <stdexcept>
#include <unordered_set>

#include "hetpar/errors.hpp"

#ifdef __linux__
#include <pthread.h>
#include <sched.h>
#endif

namespace hetpar {

namespace {

constexpr auto kSpinWindow = std::chrono::microseconds(50);

bool pin_current_thread(int core_id) {
#ifdef __linux__
    if (core_id < 0 || core_id >= CPU_SETSIZE) {
        return false;
    }
    cpu_set_t set;
    CPU_ZERO(&set);
    CPU_SET(core_id, &set);
    return pthread_setaffinity_np(pthread_self(), sizeof(set), &set) == 0;
#else
    (void)core_id;
    return false;  // no affinity API on this platform
#endif
}

void cpu_relax() {
#if defined(__x86_64__) || defined(__i386__)
    __builtin_ia32_pause();
#elif defined(__aarch64__)
    asm volatile("yield");
#endif
}

std::vector<int> parse_core_list(std::string_view csv) {
    std::vector<int> ids;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        const std::size_t comma = std::min(csv.find(',', pos), csv.size());
        const std::string_view tok = csv.substr(pos, comma - pos);
        int value = 0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
        if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
            throw std::invalid_argument("invalid core id '" + std::string(tok) + "'");
        }
        ids.push_back(value);
        if (comma == csv.size()) break;
        pos = comma + 1;
    }
    return ids;
}

}  // namespace

CoreSet::CoreSet(std::vector<int> ids) : core_ids(std::move(ids)) {
    if (core_ids.empty()) {
        throw std::invalid_argument("core set must contain at least one core");
    }
    std::unordered_set<int> seen;
    for (int id : core_ids) {
        if (id < 0) {
            throw std::invalid_argument("core ids must be non-negative");
        }
        if (!seen.insert(id).second) {
            throw std::invalid_argument("duplicate core id " + std::to_string(id));
        }
    }
}

CoreSet CoreSet::parse(std::string_view csv) {
    return CoreSet(parse_core_list(csv));
}

CoreSet CoreSet::detect() {
    const unsigned n = std::max(1u, std::thread::hardware_concurrency());
    std::vector<int> ids(n);
    for (unsigned i = 0; i < n; ++i) ids[i] = static_cast<int>(i);
    return CoreSet(std::move(ids));
}

std::optional<CoreSet> CoreSet::from_env() {
    const char* env = std::getenv("HETPAR_CORES");
    if (env == nullptr || *env == '\0') {
        return std::nullopt;
    }
    return CoreSet::parse(env);
}

bool PoolMetadata::all_pinned() const {
    return std::all_of(pinned.begin(), pinned.end(), [](bool b) { return b; });
}

ThreadPool::ThreadPool(CoreSet cores, PinningMode mode)
    : cores_(std::move(cores)), slots_(cores_.size()) {
    const std::size_t n = cores_.size();
    metadata_.mode = mode;
    metadata_.pinned.assign(n, false);

    std::latch ready(static_cast<std::ptrdiff_t>(n));
    std::vector<char> pin_ok(n, 0);

    workers_.reserve(n);
    try {
        for (std::size_t i = 0; i < n; ++i) {
            workers_.emplace_back([this, i, mode, &ready, &pin_ok] {
                if (mode != PinningMode::kOff) {
                    pin_ok[i] = pin_current_thread(cores_.core_ids[i]) ? 1 : 0;
                }
                ready.count_down();
                worker_main(i);
            });
        }
    } catch (const std::system_error& e) {
        stop_.store(true, std::memory_order_release);
        launch_cv_.notify_all();
        for (auto& w : workers_) w.join();
        throw Error(std::string("failed to create worker threads: ") + e.what());
    }

    ready.wait();
    for (std::size_t i = 0; i < n; ++i) {
        metadata_.pinned[i] = pin_ok[i] != 0;
    }
    if (mode == PinningMode::kStrict) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!metadata_.pinned[i]) {
                const int failed_core = cores_.core_ids[i];
                shutdown();
                throw PinningError(failed_core);
            }
        }
    }
}

ThreadPool::~ThreadPool() {
    shutdown();
}

void ThreadPool::worker_main(std::size_t index) {
    std::uint64_t seen = 0;
    for (;;) {
        // spin briefly on the generation counter before parking
        const auto spin_deadline = std::chrono::steady_clock::now() + kSpinWindow;
        while (generation_.load(std::memory_order_acquire) == seen &&
               !stop_.load(std::memory_order_acquire) &&
               std::chrono::steady_clock::now() < spin_deadline) {
            cpu_relax();
        }
        {
            std::unique_lock lock(mutex_);
            launch_cv_.wait(lock, [&] {
                return stop_.load(std::memory_order_relaxed) ||
                       generation_.load(std::memory_order_relaxed) != seen;
            });
            if (generation_.load(std::memory_order_relaxed) == seen) {
                return;  // stop requested, no pending launch
            }
            seen = generation_.load(std::memory_order_relaxed);
        }

        Slot& slot = slots_[index];
        if (slot.work) {
            const auto t0 = std::chrono::steady_clock::now();
            try {
                slot.work(slot.begin, slot.end);
            } catch (...) {
                slot.error = std::current_exception();
            }
            const auto t1 = std::chrono::steady_clock::now();
            slot.elapsed_s = std::chrono::duration<double>(t1 - t0).count();
        }

        {
            std::lock_guard lock(mutex_);
            if (--remaining_ == 0) {
                done_cv_.notify_one();
            }
        }
    }
}

TaskTiming ThreadPool::execute(std::span<const SubTask> subtasks) {
    if (closed()) {
        throw PoolClosedError();
    }
    const std::size_t n = cores_.size();
    TaskTiming timing;
    timing.per_core_elapsed.assign(n, 0.0);
    timing.per_core_units.assign(n, 0);

    std::vector<char> used(n, 0);
    std::size_t dispatched = 0;
    for (const SubTask& t : subtasks) {
        if (t.core_index >= n) {
            throw std::invalid_argument("sub-task core index out of range");
        }
        if (used[t.core_index]) {
            throw std::invalid_argument("multiple sub-tasks for core index " +
                                        std::to_string(t.core_index));
        }
        if (t.begin > t.end) {
            throw std::invalid_argument("sub-task range is inverted");
        }
        used[t.core_index] = 1;
        timing.per_core_units[t.core_index] = t.end - t.begin;
        if (t.begin == t.end || !t.work) {
            continue;  // legal no-op, zero recorded time
        }
        Slot& slot = slots_[t.core_index];
        slot.work = t.work;
        slot.begin = t.begin;
        slot.end = t.end;
        ++dispatched;
    }
    if (dispatched == 0) {
        for (Slot& s : slots_) s.work = nullptr;
        return timing;
    }

    {
        std::lock_guard lock(mutex_);
        remaining_ = n;
        generation_.fetch_add(1, std::memory_order_release);
        launch_cv_.notify_all();
    }
    {
        std::unique_lock lock(mutex_);
        done_cv_.wait(lock, [&] { return remaining_ == 0; });
    }

    std::exception_ptr error;
    std::size_t failed_core = 0;
    for (std::size_t i = 0; i < n; ++i) {
        Slot& slot = slots_[i];
        timing.per_core_elapsed[i] = slot.elapsed_s;
        if (slot.error && !error) {
            error = slot.error;
            failed_core = i;
        }
        slot.work = nullptr;
        slot.elapsed_s = 0.0;
        slot.error = nullptr;
    }
    if (error) {
        try {
            std::rethrow_exception(error);
        } catch (const std::exception& e) {
            throw TaskFailedError(failed_core, e.what());
        } catch (...) {
            throw TaskFailedError(failed_core, "unknown exception");
        }
    }
    return timing;
}

void ThreadPool::shutdown() {
    bool expected = false;
    if (!closed_.compare_exchange_strong(expected, true, std::memory_order_acq_rel)) {
        return;  // idempotent
    }
    {
        std::lock_guard lock(mutex_);
        stop_.store(true, std::memory_order_release);
        launch_cv_.notify_all();
    }
    for (auto& w : workers_) {
        if (w.joinable()) w.join();
    }
}

}  // namespace hetpar

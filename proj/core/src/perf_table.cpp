// SPDX-License-Identifier: Apache-2.0
#include "hetpar/perf_table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <stdexcept>

#include "hetpar/errors.hpp"

namespace hetpar {

namespace {

void normalize_to_mean_one(std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    const double mean = sum / static_cast<double>(v.size());
    for (double& x : v) x /= mean;
}

}  // namespace

KernelClass::KernelClass(std::string label) : id(std::move(label)) {
    if (id.empty()) {
        throw std::invalid_argument("kernel class label must be non-empty");
    }
}

std::vector<double> raw_update(std::span<const double> ratios, const TaskTiming& timing) {
    const std::size_t n = ratios.size();
    if (timing.per_core_elapsed.size() != n || timing.per_core_units.size() != n) {
        throw std::invalid_argument("timing dimensions do not match the ratio vector");
    }

    std::vector<std::size_t> participants;
    participants.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(ratios[i] > 0.0) || !std::isfinite(ratios[i])) {
            throw std::invalid_argument("ratios must be strictly positive and finite");
        }
        if (timing.per_core_units[i] > 0) {
            participants.push_back(i);
        }
    }
    if (participants.size() < 2) {
        throw std::invalid_argument("ratio update requires at least two participating cores");
    }
    for (std::size_t i : participants) {
        if (timing.per_core_elapsed[i] <= kClockEpsilon) {
            throw DegenerateTimingError(i, timing.per_core_elapsed[i]);
        }
    }

    // pr_i' = (pr_i / t_i) / sum_j (pr_j / t_j), the simplified form of the
    // update; rescale so the participant mean is 1.
    double speed_sum = 0.0;
    for (std::size_t i : participants) {
        speed_sum += ratios[i] / timing.per_core_elapsed[i];
    }

    std::vector<double> out(ratios.begin(), ratios.end());
    double part_sum = 0.0;
    for (std::size_t i : participants) {
        out[i] = (ratios[i] / timing.per_core_elapsed[i]) / speed_sum;
        part_sum += out[i];
    }
    const double part_mean = part_sum / static_cast<double>(participants.size());
    for (std::size_t i : participants) {
        out[i] /= part_mean;
    }
    return out;
}

PerformanceTable::PerformanceTable(std::size_t n_cores, double alpha, double initial_ratio)
    : n_cores_(n_cores), alpha_(alpha), initial_ratio_(initial_ratio) {
    if (n_cores == 0) {
        throw std::invalid_argument("performance table needs at least one core");
    }
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("filter gain alpha must lie in [0, 1]");
    }
    if (!(initial_ratio > 0.0) || !std::isfinite(initial_ratio)) {
        throw std::invalid_argument("initial ratio must be strictly positive");
    }
}

std::vector<double>& PerformanceTable::materialize(const KernelClass& cls) const {
    auto it = table_.find(cls.id);
    if (it == table_.end()) {
        std::vector<double> v(n_cores_, initial_ratio_);
        normalize_to_mean_one(v);  // any uniform positive init becomes all ones
        it = table_.emplace(cls.id, std::move(v)).first;
    }
    return it->second;
}

std::vector<double> PerformanceTable::ratios(const KernelClass& cls) const {
    {
        std::shared_lock lock(mutex_);
        auto it = table_.find(cls.id);
        if (it != table_.end()) {
            return it->second;
        }
    }
    std::unique_lock lock(mutex_);
    return materialize(cls);
}

std::vector<double> PerformanceTable::update(const KernelClass& cls, const TaskTiming& timing) {
    std::unique_lock lock(mutex_);
    std::vector<double>& stored = materialize(cls);
    std::vector<double> raw = raw_update(stored, timing);  // may throw; stored unchanged

    if (alpha_ == 1.0) {
        return stored;  // full weight on the old value
    }
    for (std::size_t i = 0; i < stored.size(); ++i) {
        const double blended = alpha_ * stored[i] + (1.0 - alpha_) * raw[i];
        stored[i] = std::max(blended, kRatioFloor);
    }
    normalize_to_mean_one(stored);
    return stored;
}

void write_trace_header(std::ostream& os, std::size_t n_cores) {
    os << "iteration,kernel_class";
    for (std::size_t i = 0; i < n_cores; ++i) {
        os << ",core_" << i;
    }
    os << "\n";
}

void write_trace_row(std::ostream& os, std::uint64_t iteration, const KernelClass& cls,
                     std::span<const double> ratios) {
    os << iteration << ',' << cls.id;
    char buf[32];
    for (double r : ratios) {
        std::snprintf(buf, sizeof(buf), "%.6f", r);
        os << ',' << buf;
    }
    os << "\n";
}

}  // namespace hetpar

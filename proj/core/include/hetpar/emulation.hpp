// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "hetpar/thread_pool.hpp"

namespace hetpar {

// Per-core slowdown factors used to manufacture reproducible heterogeneity on
// homogeneous machines. Factor 1 means native speed; factor f makes the core
// appear 1/f as fast without changing any computed result.
struct CoreProfile {
    std::vector<double> slowdown;  // each >= 1

    static CoreProfile uniform(std::size_t n_cores, double factor = 1.0);

    std::size_t size() const { return slowdown.size(); }
    bool is_identity() const;
};

// Parses a profile spec: either one factor per core ("1,1,3,3") or
// count-x-factor shorthand ("2x1,2x3"). Throws ParseError with the offending
// position on syntax errors, std::invalid_argument on count mismatch or
// factors < 1.
CoreProfile profile_from_spec(std::string_view spec, std::size_t n_cores);

// Decorates range work with time dilation: runs the real work, measures its
// elapsed e on the monotonic clock, then busy-waits (f - 1) * e so the total
// observed time is f * e. The spin uses the same clock as the timing, so the
// dilation is exact by construction and results are untouched.
RangeWork wrap_kernel(RangeWork work, const CoreProfile& profile, std::size_t core_index);

// Profile switch plan for the bench CLI: "<spec>@<iteration>[,...]", e.g.
// "1,1,3,3@0,1,1,1,1@40". A bare "<spec>" installs at iteration 0. Iterations
// must be strictly increasing.
class ProfileSchedule {
public:
    ProfileSchedule() = default;

    static ProfileSchedule parse(std::string_view text, std::size_t n_cores);

    // Latest profile installed at or before the launch index, or nullptr.
    const CoreProfile* profile_at(std::uint64_t launch_index) const;

    bool empty() const { return switches_.empty(); }
    const std::vector<std::pair<std::uint64_t, CoreProfile>>& switches() const {
        return switches_;
    }

private:
    std::vector<std::pair<std::uint64_t, CoreProfile>> switches_;  // sorted
};

}  // namespace hetpar

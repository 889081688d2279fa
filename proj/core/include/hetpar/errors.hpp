// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hetpar {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A measured elapsed time fell at or below the clock epsilon; the caller
// must skip this update round.
class DegenerateTimingError : public Error {
public:
    DegenerateTimingError(std::size_t core_index, double elapsed_s)
        : Error("degenerate timing on core " + std::to_string(core_index) + ": " +
                std::to_string(elapsed_s) + " s"),
          core_index_(core_index) {}

    std::size_t core_index() const noexcept { return core_index_; }

private:
    std::size_t core_index_;
};

class PinningError : public Error {
public:
    explicit PinningError(int core_id)
        : Error("failed to pin worker thread to core " + std::to_string(core_id)),
          core_id_(core_id) {}

    int core_id() const noexcept { return core_id_; }

private:
    int core_id_;
};

class TaskFailedError : public Error {
public:
    TaskFailedError(std::size_t core_index, const std::string& what)
        : Error("sub-task on core index " + std::to_string(core_index) + " failed: " + what),
          core_index_(core_index) {}

    std::size_t core_index() const noexcept { return core_index_; }

private:
    std::size_t core_index_;
};

class PoolClosedError : public Error {
public:
    PoolClosedError() : Error("thread pool has been shut down") {}
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " (at position " + std::to_string(position) + ")"),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace hetpar

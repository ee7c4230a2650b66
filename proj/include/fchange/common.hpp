#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace fchange {

// Invalid user-supplied input (file contents, configuration, flag values).
// The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Violation of an internal precondition; indicates a caller bug, not bad data.
class LogicError : public std::logic_error {
public:
    explicit LogicError(const std::string& msg) : std::logic_error(msg) {}
};

// Worker count for embarrassingly parallel loops: FCHANGE_THREADS if set,
// otherwise the hardware concurrency. Always at least 1.
int worker_count();

// Runs fn(i) for i in [0, count). Iterations must not depend on each other;
// results must be written to disjoint slots so the outcome is identical for
// any worker count.
void parallel_for(std::int64_t count, const std::function<void(std::int64_t)>& fn);

}  // namespace fchange

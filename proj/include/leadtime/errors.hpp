#pragma once

#include <stdexcept>
#include <string>

namespace leadtime {

// Bad user input: malformed files, invalid flags, precondition violations
// on caller-supplied data. CLI maps this to exit code 1.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// A computation could not produce a result (insufficient history, failed
// numeric solve, internal invariant breach). CLI maps this to exit code 2.
class ComputeError : public std::runtime_error {
public:
    explicit ComputeError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace leadtime

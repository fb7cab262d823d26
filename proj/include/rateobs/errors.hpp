#pragma once

#include <stdexcept>
#include <string>

namespace rateobs {

/// Input violating a documented precondition or a scenario schema rule.
class InvalidInput : public std::runtime_error {
public:
    explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical blow-up or an iterative routine that failed to converge.
class NumericFailure : public std::runtime_error {
public:
    explicit NumericFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem read/write failure.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rateobs

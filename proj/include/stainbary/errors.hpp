#pragma once

#include <stdexcept>
#include <string>

namespace stainbary {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Precondition violation: mismatched dimensions, out-of-range parameters.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Numerical failure inside an iterative solver (NaN/Inf in the iterates).
class SolverError : public Error {
public:
    SolverError(const std::string& message, int iteration)
        : Error(message + " (iteration " + std::to_string(iteration) + ")"),
          iteration_(iteration) {}

    int iteration() const { return iteration_; }

private:
    int iteration_;
};

/// File or codec failure.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace stainbary

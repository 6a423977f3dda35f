#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ttlr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shape or length mismatch between operands.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Out-of-range or otherwise invalid parameter value.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A supplied matrix failed the unitarity test.
class UnitarityError : public Error {
public:
    UnitarityError(const std::string& what, double deviation);
    double deviation() const noexcept { return deviation_; }

private:
    double deviation_;
};

/// Numerical failure (SVD non-convergence, 0/0 in a closed-form update).
class NumericError : public Error {
public:
    explicit NumericError(const std::string& what, std::ptrdiff_t slice = -1);
    /// 1-based slice index that failed, or -1 when not slice-specific.
    std::ptrdiff_t slice() const noexcept { return slice_; }

private:
    std::ptrdiff_t slice_;
};

/// Non-finite iterate in an iterative solver.
class DivergenceError : public NumericError {
public:
    DivergenceError(const std::string& what, int iteration);
    int iteration() const noexcept { return iteration_; }

private:
    int iteration_;
};

/// File could not be read, written, or parsed.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace ttlr

// Copyright (c) 2026 The fewspace Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace fewspace {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Arguments of incompatible dimensions (point length, nvars, matrix size).
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A value outside the mathematical domain of an operation, e.g. a zero
/// coordinate for a Laurent space or a point outside the hyperbolic disk.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Kernel evaluation overflowed double precision.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// K(x,x) vanished numerically, so log K is undefined.
class SingularEvaluation : public Error {
public:
    using Error::Error;
};

/// A density became negative beyond round-off.
class NegativeDensity : public Error {
public:
    using Error::Error;
};

/// The space has no explicit diagonal orthonormal basis.
class NotDiagonal : public Error {
public:
    using Error::Error;
};

/// The argument principle could not be applied (zero on or near the contour).
class ContourError : public Error {
public:
    using Error::Error;
};

/// Monte Carlo run aborted (too many discarded samples).
class SamplingError : public Error {
public:
    using Error::Error;
};

/// Malformed space-spec document. Syntax errors carry a 1-based line and
/// column; schema errors carry a JSON pointer to the offending value.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line, int column)
        : Error(what), line_(line), column_(column) {}
    ParseError(const std::string& what, std::string pointer)
        : Error(what), pointer_(std::move(pointer)) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }
    const std::string& pointer() const noexcept { return pointer_; }

private:
    int line_ = 0;
    int column_ = 0;
    std::string pointer_;
};

} // namespace fewspace

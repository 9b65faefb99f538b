#pragma once

#include <stdexcept>
#include <string>

namespace speclab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (sizes, ranges, normalization).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// z^n cannot be represented in double precision; use the balanced matrix.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// The dense eigensolver did not converge.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// A transfer factor with b_k = 0 was requested.
class SingularFactorError : public Error {
public:
    using Error::Error;
};

/// The contour of an argument-principle evaluation passes through a zero.
class ContourError : public Error {
public:
    using Error::Error;
};

} // namespace speclab

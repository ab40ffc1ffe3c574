#pragma once

#include <stdexcept>
#include <string>

namespace arcov {

/// Base class for all arcov-specific failures.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// The lag matrix built from the target is singular or too ill-conditioned
/// to invert (condition number above the configured threshold).
class NonInvertibleTargetError : public Error {
public:
    using Error::Error;
};

/// The target cannot be realized by the requested scheme: the implied noise
/// variance (b^2, or an eigenvalue of BB') came out negative.
class TargetNotRealizableError : public Error {
public:
    using Error::Error;
};

/// A model whose characteristic roots do not lie outside the unit circle.
class NonStationaryModelError : public Error {
public:
    using Error::Error;
};

/// An iterative solver exhausted its iteration budget.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// The optimizer could not evaluate a single feasible candidate.
class OptimizationError : public Error {
public:
    using Error::Error;
};

/// A computation was refused because it would exceed a configured
/// resource guard (e.g. the companion-form Kronecker system size).
class ResourceLimitError : public Error {
public:
    using Error::Error;
};

} // namespace arcov

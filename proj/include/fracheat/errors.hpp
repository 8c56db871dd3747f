#pragma once

#include <stdexcept>
#include <string>

namespace fracheat {

/// Input outside the mathematical domain of an operation (alpha range, t <= 0, ...).
class DomainError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Inconsistent or incomplete configuration (missing tail model, unknown suite, bad flag).
class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed input file. The message names the line (CSV) or byte offset (JSON).
class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A numerical procedure ran out of budget before meeting its error target.
/// Carries the best estimate so callers may still use it.
class NumericalError : public std::runtime_error {
  public:
    NumericalError(const std::string &what, double best_estimate, double achieved_error)
        : std::runtime_error(what), best_estimate_(best_estimate), achieved_error_(achieved_error) {}

    double best_estimate() const noexcept { return best_estimate_; }
    double achieved_error() const noexcept { return achieved_error_; }

  private:
    double best_estimate_;
    double achieved_error_;
};

/// Quadrature failed to reach its target error within the node budget.
class AccuracyNotReached : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

/// Successive cutoff extrapolants of a principal value were not Cauchy within tolerance.
class PvNotConverged : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

/// A computed stable density was not strictly positive (signals a quadrature failure).
class BoundViolated : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

} // namespace fracheat

#ifndef QWZ_ERRORS_HPP
#define QWZ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qwz {

/// Invalid specification or configuration input (bad geometry, out-of-range
/// impurity, inadmissible bath parameters, ...).
class ConfigError : public std::invalid_argument {
public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

/// Numerical failure (defective eigenproblem, singular resolvent, ...).
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Resolvent evaluated at (or too close to) a real pole.
class SingularityError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

/// Adaptive quadrature failed to reach the requested tolerance. Carries the
/// best error estimate at the point of failure.
class IntegrationError : public NumericalError {
public:
  IntegrationError(const std::string& message, double error_estimate)
      : NumericalError(message + " (error estimate " + std::to_string(error_estimate) + ")"),
        error_estimate_(error_estimate) {}
  double error_estimate() const noexcept { return error_estimate_; }

private:
  double error_estimate_ = 0.0;
};

} // namespace qwz

#endif

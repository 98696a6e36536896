#pragma once

#include <stdexcept>
#include <string>

namespace abfield {

/// Malformed or invalid configuration. `field()` names the offending key
/// (dotted path, e.g. "setup.T") so diagnostics can point at it.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Numerical failure at run time: quadrature non-convergence, probability
/// reaching the periodic seam, sampling too coarse to unwrap a phase.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace abfield

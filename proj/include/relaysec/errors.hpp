#pragma once

#include <stdexcept>
#include <string>

namespace relaysec {

/// Argument outside the documented range of an operation (k > n, eps outside (0,1], ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input value outside the mathematical domain (non-finite x, probability outside [0,1]).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Scenario that cannot be simulated as configured, e.g. an SINR with a zero denominator.
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical procedure failed to reach its accuracy target.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace relaysec

#pragma once

#include <stdexcept>
#include <string>

namespace grw {

// Argument outside the admissible domain of a material law.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Caller broke a documented precondition (weights, params, shapes).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Jump-probability cap violated; the time step is too large for the lattice.
class TimeStepError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Scenario configuration could not be interpreted.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ContractViolation(what);
}

}  // namespace grw

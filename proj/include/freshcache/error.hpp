#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace freshcache {

/// Input failed validation. `field()` names the offending parameter.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A formula was evaluated outside its domain (division by zero, pole, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An integer or real argmin landed on the edge of its search range.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical witness contradicted an expected structural property
/// (non-threshold policy, non-monotone value function, binding truncation).
class StructureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace freshcache

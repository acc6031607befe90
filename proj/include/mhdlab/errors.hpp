#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mhdlab {

/// Invalid configuration or violated precondition on user input.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a formula (e.g. alpha not in (1,2)).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// NaN/Inf in a field, singular linear solve, or a broken post-step invariant.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, std::ptrdiff_t node = -1)
      : std::runtime_error(what + (node >= 0 ? " (node " + std::to_string(node) + ")" : "")),
        node_(node) {}

  std::ptrdiff_t node() const noexcept { return node_; }

 private:
  std::ptrdiff_t node_;
};

/// A tracked interface left its admissible interval.
class TrackingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mhdlab

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bbees {

/// Argument outside the mathematical domain of an operation (t <= 0, bad dimension, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical routine could not reach its accuracy target.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A trajectory became invalid (nonfinite coordinates).
class SimulationError : public std::runtime_error {
 public:
  SimulationError(const std::string& what, std::size_t event_index)
      : std::runtime_error(what + " (event " + std::to_string(event_index) + ")"),
        event_index_(event_index) {}
  std::size_t event_index() const noexcept { return event_index_; }

 private:
  std::size_t event_index_;
};

/// A configured resource limit (population cap, grid size) was exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid run configuration or violated experiment precondition.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace bbees

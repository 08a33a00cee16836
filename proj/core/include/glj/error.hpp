#pragma once

#include <stdexcept>
#include <string>

namespace glj {

/// Invalid inputs or an infeasible parameter combination.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative solver failed to reach its tolerance.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double last_residual)
      : std::runtime_error(what), last_residual_(last_residual) {}

  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

/// File-system failures; the message always carries the offending path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace glj

#pragma once

#include <stdexcept>
#include <string>

namespace bhwork {

// Invalid user-facing configuration (bad model sizes, unknown method names,
// malformed config files). Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A refined integration failed to meet its tolerance within the allowed
// number of step-doublings. Carries the last observed drift. Exit code 3.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_drift)
      : std::runtime_error(what), last_drift_(last_drift) {}
  double last_drift() const { return last_drift_; }

 private:
  double last_drift_;
};

// A configured resource cap (basis size, dense-diagonalization dimension)
// would be exceeded. Exit code 4.
class CapExceededError : public std::runtime_error {
 public:
  explicit CapExceededError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bhwork

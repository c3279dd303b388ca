#pragma once

#include <stdexcept>
#include <string>

namespace aiofl {

/// Argument outside an operation's domain (non-finite state, bad scale factor, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Component or scenario configuration that violates its invariants.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical procedure could not produce a meaningful value.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unknown registry name.
class LookupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Integration produced a non-finite or runaway state at time `time()`.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}

  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace aiofl

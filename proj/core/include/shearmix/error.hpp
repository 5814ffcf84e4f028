#pragma once

#include <stdexcept>
#include <string>

namespace shearmix {

// Precondition violations raised by the numerical modules.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Non-finite values, failed iterations, exhausted horizons.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace shearmix

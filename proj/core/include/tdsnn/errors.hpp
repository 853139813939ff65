#pragma once

#include <stdexcept>
#include <string>

namespace tdsnn {

// Caller passed a value outside an operation's domain.
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Structurally invalid or inconsistent configuration (bad indices, undersampled
// oscillator, unknown key, ...).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Non-finite values or a singular normalisation.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class CalibrationError : public std::runtime_error {
public:
  CalibrationError(const std::string& what, std::string residuals)
      : std::runtime_error(what), residuals_(std::move(residuals)) {}

  // Human-readable best-found residuals at the point the search gave up.
  const std::string& residuals() const noexcept { return residuals_; }

private:
  std::string residuals_;
};

}  // namespace tdsnn

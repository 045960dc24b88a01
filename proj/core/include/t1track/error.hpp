#pragma once

#include <stdexcept>
#include <string>

namespace t1track {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad or inconsistent user-supplied parameters (maps to CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class UnknownPreset : public ConfigError {
 public:
  explicit UnknownPreset(const std::string& name) : ConfigError("unknown preset '" + name + "'") {}
};

/// Numerical failures (maps to CLI exit code 3).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class DomainError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The observed outcome has zero probability under the current belief.
class ZeroEvidence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoMinimum : public NumericalError {
 public:
  NoMinimum(const std::string& what, double boundary_tau, double boundary_value)
      : NumericalError(what), boundary_tau_(boundary_tau), boundary_value_(boundary_value) {}

  double boundary_tau() const noexcept { return boundary_tau_; }
  double boundary_value() const noexcept { return boundary_value_; }

 private:
  double boundary_tau_;
  double boundary_value_;
};

class FitDiverged : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class InsufficientData : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class TooManyShots : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class QuadratureFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class TraceTooShort : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace t1track

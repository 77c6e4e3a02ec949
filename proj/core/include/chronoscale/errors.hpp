#pragma once

#include <stdexcept>
#include <string>

namespace chronoscale {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A time value was used that does not belong to the time scale.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The nabla derivative was requested at the minimum of the time scale.
class UndefinedDerivativeError : public Error {
 public:
  using Error::Error;
};

/// 1 - nu(t) p(t) vanished (or went negative where positivity is needed).
class RegressivityError : public Error {
 public:
  RegressivityError(const std::string& what, double at) : Error(what), at_(at) {}
  double at() const noexcept { return at_; }

 private:
  double at_;
};

/// inf |alpha_i| or inf |c_i| is zero, so no decay certificate exists.
class DegenerateDecayError : public Error {
 public:
  using Error::Error;
};

/// The existence/contraction conditions fail, or M <= 1.
class NoCertificateError : public Error {
 public:
  using Error::Error;
};

/// A delayed lookup reached before the stored history.
class HistoryUnderflowError : public Error {
 public:
  HistoryUnderflowError(const std::string& what, double at) : Error(what), at_(at) {}
  double at() const noexcept { return at_; }

 private:
  double at_;
};

/// The implicit scattered step failed to converge.
class StepFailureError : public Error {
 public:
  StepFailureError(const std::string& what, double at) : Error(what), at_(at) {}
  double at() const noexcept { return at_; }

 private:
  double at_;
};

/// Two trajectories compared on different grids.
class GridMismatchError : public Error {
 public:
  using Error::Error;
};

/// A series does not cover the requested window.
class CoverageError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration text.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0, std::string field = {})
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line),
        field_(std::move(field)) {}
  int line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  int line_;
  std::string field_;
};

}  // namespace chronoscale

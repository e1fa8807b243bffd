#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ostrovsky {

enum class ErrorCode {
  invalid_argument,
  precondition,
  convergence,
  quadrature,
  config,
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Argument outside the documented domain (odd grid size, b out of range, ...).
class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(ErrorCode::invalid_argument, what) {}
};

/// Input is well-formed but violates an operation precondition (non-mean-zero
/// data for a negative-order multiplier, grid mismatch, lost phase accuracy).
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(ErrorCode::precondition, what) {}
};

class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double estimate)
      : Error(ErrorCode::quadrature, what), estimate_(estimate) {}
  double estimate() const noexcept { return estimate_; }

 private:
  double estimate_;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : Error(ErrorCode::config, key.empty() ? what : key + ": " + what), key_(key) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::io, what) {}
};

// Non-fatal diagnostics (boundary mass, wrap-around). The default handler
// writes to stderr; tests and the C API install their own.
using WarningHandler = std::function<void(std::string_view)>;
WarningHandler set_warning_handler(WarningHandler handler);
void warn(std::string_view message);

}  // namespace ostrovsky

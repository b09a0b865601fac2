#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace metaline {

enum class ErrorKind {
  kDomain,      // argument outside the mathematical domain of an operation
  kValidation,  // malformed circuit / qubit description
  kNumerical,   // ill-conditioning, non-convergence
  kConfig,      // configuration text could not be parsed
  kIo,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::kDomain, what) {}
};

/// Raised by CircuitSpec / QubitSpec validation. fields() names every offending field.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& what, std::vector<std::string> fields)
      : Error(ErrorKind::kValidation, what), fields_(std::move(fields)) {}
  const std::vector<std::string>& fields() const noexcept { return fields_; }

 private:
  std::vector<std::string> fields_;
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorKind::kNumerical, what) {}
};

/// line() is 1-based; 0 when the error is not tied to a line (e.g. a missing key).
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line, std::string key)
      : Error(ErrorKind::kConfig, what), line_(line), key_(std::move(key)) {}
  int line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

 private:
  int line_;
  std::string key_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::kIo, what) {}
};

}  // namespace metaline

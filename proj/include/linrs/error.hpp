#pragma once

#include <stdexcept>
#include <string>

namespace linrs {

// Process exit codes used by the command-line driver.
enum class ExitCode : int {
  kSuccess = 0,
  kUsage = 2,
  kData = 3,
  kNumerical = 4,
};

class Error : public std::runtime_error {
 public:
  Error(const std::string& what, ExitCode code)
      : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

// Bad argument shape or value passed to a library call.
class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(what, ExitCode::kUsage) {}
};

// Invalid experiment configuration (field name is part of the message).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(what, ExitCode::kUsage) {}
};

// Non-finite input, failed factorization, zero reference timings.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(what, ExitCode::kNumerical) {}
};

// Input data that cannot be used: missing files, bad symbols, bad layout.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(what, ExitCode::kData) {}
};

class ParseError : public DataError {
 public:
  using DataError::DataError;
};

class FormatError : public DataError {
 public:
  using DataError::DataError;
};

// Synthetic filter could not reach a usable acceptance rate.
class InfeasibleError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace linrs

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pregp {

/// Base of every error thrown by the library. `exit_code()` is the CLI status
/// the error maps to (3 validation-like, 4 numerical).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  [[nodiscard]] virtual int exit_code() const noexcept { return 3; }
};

/// Malformed arguments: dimension mismatch, empty inputs, bad sizes.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Non-finite or otherwise unusable model parameters.
class ParameterError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// A formula was evaluated outside the region where it is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

class NoMatchingDataError : public Error {
 public:
  using Error::Error;
};

class DegenerateMomentsError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] int exit_code() const noexcept override { return 4; }
};

/// Factorization failed at every jitter level in `attempted_jitter()`.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what, std::vector<double> attempted = {})
      : Error(what), attempted_(std::move(attempted)) {}
  [[nodiscard]] const std::vector<double>& attempted_jitter() const noexcept { return attempted_; }
  [[nodiscard]] int exit_code() const noexcept override { return 4; }

 private:
  std::vector<double> attempted_;
};

/// Objective was non-finite while differencing coordinate `coordinate()`.
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, std::size_t coordinate)
      : Error(what), coordinate_(coordinate) {}
  [[nodiscard]] std::size_t coordinate() const noexcept { return coordinate_; }
  [[nodiscard]] int exit_code() const noexcept override { return 4; }

 private:
  std::size_t coordinate_;
};

class InitializationError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] int exit_code() const noexcept override { return 4; }
};

}  // namespace pregp

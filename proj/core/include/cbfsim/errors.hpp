#pragma once

#include <stdexcept>
#include <string>

namespace cbfsim {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Expression source could not be tokenized or parsed. Carries the byte
/// offset into the source and the offending token text.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position, std::string token)
      : Error(message + " at position " + std::to_string(position) +
              (token.empty() ? "" : " near '" + token + "'")),
        position_(position),
        token_(std::move(token)) {}

  std::size_t position() const { return position_; }
  const std::string& token() const { return token_; }

 private:
  std::size_t position_;
  std::string token_;
};

class IndexOutOfRangeError : public Error {
 public:
  using Error::Error;
};

class UnknownFunctionError : public Error {
 public:
  using Error::Error;
};

class UnboundParameterError : public Error {
 public:
  explicit UnboundParameterError(const std::string& name)
      : Error("unbound parameter '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class NonDifferentiableError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

class UnknownModelError : public Error {
 public:
  using Error::Error;
};

class DegreeNotFoundError : public Error {
 public:
  using Error::Error;
};

class InsufficientGainsError : public Error {
 public:
  using Error::Error;
};

class InvalidRectangleError : public Error {
 public:
  using Error::Error;
};

class NonUnitRelativeDegreeError : public Error {
 public:
  using Error::Error;
};

class IllConditionedError : public Error {
 public:
  using Error::Error;
};

class CholeskyFailureError : public Error {
 public:
  using Error::Error;
};

class SingularInnovationError : public Error {
 public:
  using Error::Error;
};

class NonFiniteStateError : public Error {
 public:
  using Error::Error;
};

/// Scenario configuration failed validation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace cbfsim

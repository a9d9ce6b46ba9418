#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace abeltc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: malformed expressions, invalid problem parameters,
/// unreadable configs. The CLI maps these to exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Failure while computing: domain errors, singular ratios, solver defects.
/// The CLI maps these to exit code 2.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Lexical, syntax, arity or unknown-function error in an expression.
class ParseError : public ValidationError {
 public:
  enum class Kind { lexical, syntax, arity, unknown_function, unknown_variable };

  ParseError(Kind kind, std::size_t position, const std::string& what)
      : ValidationError(what + " at offset " + std::to_string(position)),
        kind_(kind),
        position_(position) {}

  Kind kind() const noexcept { return kind_; }
  std::size_t position() const noexcept { return position_; }

 private:
  Kind kind_;
  std::size_t position_;
};

/// Unbound variable or non-finite intermediate during evaluation.
class EvalError : public NumericError {
 public:
  enum class Kind { unbound_variable, domain };

  EvalError(Kind kind, const std::string& what) : NumericError(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace abeltc

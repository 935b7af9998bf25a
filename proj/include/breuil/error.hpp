#pragma once

#include <stdexcept>
#include <string>

namespace breuil {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in different rings (frame, level, precision or kind differ).
class RingMismatch : public Error {
 public:
  using Error::Error;
};

/// An exact operation had no solution in the truncated ring: non-unit inverse,
/// non-exact division, failed hypothesis.
class ArithmeticError : public Error {
 public:
  using Error::Error;
};

/// The requested computation needs more precision or a larger truncation than
/// the frame provides.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text. Carries a 1-based line and column.
class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& message)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column),
        message_(message) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  int line_;
  int column_;
  std::string message_;
};

}  // namespace breuil

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace mahler {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands have incompatible sizes or variable sets.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition or mathematical hypothesis does not hold.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A matrix or scalar that must be invertible is not.
class SingularError : public Error {
 public:
  using Error::Error;
};

/// A rational function was evaluated at one of its poles.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// Order-by-order gauge construction met a singular linear system.
class ResonanceError : public Error {
 public:
  ResonanceError(const std::string& what, int degree)
      : Error(what), degree_(degree) {}
  int degree() const noexcept { return degree_; }

 private:
  int degree_;
};

/// A computed error bound is larger than the requested tolerance.
class ToleranceError : public Error {
 public:
  ToleranceError(const std::string& what, std::string achieved)
      : Error(what), achieved_(std::move(achieved)) {}
  const std::string& achieved() const noexcept { return achieved_; }

 private:
  std::string achieved_;
};

/// Malformed textual input, with a 1-based source location.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what + " at " + std::to_string(line) + ":" +
              std::to_string(column)),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace mahler

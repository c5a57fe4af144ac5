#pragma once

#include <stdexcept>
#include <string>

namespace cosmop {

// Base for every error the library raises. The C API maps each subclass to a
// distinct status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed input text (JSON, formula syntax, plan files).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0, int column = 0)
      : Error(line > 0 ? what + " at line " + std::to_string(line) + ", column " +
                             std::to_string(column)
                       : what),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Well-formed input that violates a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Formula evaluation could not produce a truth value (missing symbol, term
// index outside the trace window). Never conflated with `false`.
class EvalError : public Error {
 public:
  using Error::Error;
};

// The encoder was asked to produce a term outside the valuation window.
class EncodeError : public Error {
 public:
  using Error::Error;
};

// Solver session misuse or unusable solver output.
class SolverError : public Error {
 public:
  using Error::Error;
};

// Disagreement between independent routes that must agree (encoder vs
// evaluator). Always a bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace cosmop

#pragma once

#include <stdexcept>
#include <string>

namespace regressia {

// Every failure the library reports is one of these. The CLI maps the
// category to its exit status, so callers should throw the most specific one.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A hard cap (arity, ground size, search space) would be exceeded.
class BudgetError : public Error {
public:
  using Error::Error;
};

/// A map was queried outside its domain.
class MissingKeyError : public Error {
public:
  using Error::Error;
};

/// An operation was called on inputs that violate its stated precondition.
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// A decreasing functional returned a value outside fld(f) ∪ coords(x).
class ContractViolation : public Error {
public:
  using Error::Error;
};

/// Malformed textual or structured input.
class ParseError : public Error {
public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : Error(msg + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
        line_(line),
        column_(column) {}

  explicit ParseError(const std::string& msg) : Error(msg) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_ = 0;
  std::size_t column_ = 0;
};

}  // namespace regressia

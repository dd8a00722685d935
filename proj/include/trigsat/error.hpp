#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace trigsat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition (invalid selection, unsaturated
/// theory, rule applied outside its guard, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Malformed problem text. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
              message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace trigsat

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace frex {

// Base of every error raised by the toolkit. The CLI maps any Error to exit
// code 1; anything else escaping is a bug.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input text could not be parsed. line is 1-based, 0 when not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Well-formed input that violates a domain invariant or precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace frex

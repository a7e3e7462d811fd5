#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ttlcache {

// A policy, distribution or generator parameter is outside its valid range.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A negative time was passed to a distribution function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Trace contents violate ordering or value constraints.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotFoundError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Malformed trace-file input. line() is 1-based; 0 when no line applies.
class ParseError : public ValidationError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : ValidationError(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace ttlcache

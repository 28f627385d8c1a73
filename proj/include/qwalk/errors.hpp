#ifndef QWALK_ERRORS_HPP
#define QWALK_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qwalk {

/// Invalid construction parameters (family sizes, vertex ranges, tolerances).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed textual input. Carries the 1-based line number when known.
class ParseError : public std::invalid_argument {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::invalid_argument("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Numerical failure: non-symmetric input, eigensolver breakdown, budget.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qwalk

#endif  // QWALK_ERRORS_HPP

#pragma once

#include <stdexcept>
#include <string>

namespace qoc {

// Bad user input (dimension mismatch, malformed file, out-of-range value).
// The CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure during a run (non-finite state, eigensolver breakdown).
// The CLI maps this to exit code 1.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qoc

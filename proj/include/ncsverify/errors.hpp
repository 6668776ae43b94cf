#pragma once

#include <stdexcept>
#include <string>

namespace ncsverify {

/// Raised on malformed arguments or files (bad probability, empty trace, ...).
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when an iterative solver exhausts its budget, typically because the
/// system sits right at the edge of mean-square stability.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ncsverify

#pragma once

#include <stdexcept>
#include <string>

namespace tensamp {

/// Rejected input: bad dimensions, malformed files, undefined distributions.
class invalid_input : public std::runtime_error {
 public:
  explicit invalid_input(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: non-convergence, degenerate tensors, non-finite iterates.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tensamp

#pragma once

#include <stdexcept>

namespace quantest {

// Raised when a computation cannot proceed on the data it was given
// (degenerate sample, zero denominator, log of a non-positive estimate).
// Argument/range violations use std::invalid_argument and std::domain_error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace quantest

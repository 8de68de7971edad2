#pragma once

#include <stdexcept>
#include <string>

namespace pxplore {

// Raised when an operation's precondition is violated by its inputs
// (duplicate ids, empty candidate sets, mismatched timesteps, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when training diverges (non-finite loss or return).
class Divergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised for malformed persisted inputs (JSON schema violations).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pxplore

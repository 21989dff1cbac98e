#pragma once

#include <stdexcept>
#include <string>

namespace fitzkit {

/// Malformed or dimension-inconsistent input.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The request is well formed but outside what the representation supports.
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace fitzkit

#pragma once

#include <stdexcept>
#include <string>

namespace choicekit {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input: bad JSON, violated value invariants,
/// mismatched outcome spaces. The CLI maps these to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace choicekit

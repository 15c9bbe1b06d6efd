#pragma once

#include <stdexcept>
#include <string>

namespace electroconvect {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad counts, lengths, exponents).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An iterative eigensolver exhausted its budget before every requested pair converged.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Two objects that must share a mesh or basis do not.
class MismatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace electroconvect

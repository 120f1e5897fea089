#pragma once

#include <stdexcept>
#include <string>

namespace ilcconv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A transfer function was evaluated at (or numerically on top of) one of its poles.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// The requested analysis has no implementation for this learning kind or gain.
class Unsupported : public Error {
 public:
  using Error::Error;
};

}  // namespace ilcconv

#pragma once

#include <stdexcept>
#include <string>

namespace skillgap {

/// Base class for every error raised by the toolkit. The CLI maps the
/// concrete subclass onto a process exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument to a pure operation (threshold out of range, n = 0, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Missing file, malformed input, violated file-level invariant.
class InputError : public Error {
 public:
  using Error::Error;
};

/// An iterative numerical routine failed to converge.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace skillgap

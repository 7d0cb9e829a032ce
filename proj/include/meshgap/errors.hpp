#pragma once

#include <stdexcept>
#include <string>

namespace meshgap {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input supplied by the caller: malformed files, invariant violations,
/// inconsistent counts. The CLI maps these to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  using InputError::InputError;
};

class ValidationError : public InputError {
 public:
  using InputError::InputError;
};

class FileNotFoundError : public InputError {
 public:
  using InputError::InputError;
};

/// Failure while writing outputs.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A randomized search ran out of proposals.
class BudgetExhaustedError : public Error {
 public:
  using Error::Error;
};

/// Ray casting could not find a non-degenerate direction.
class DegenerateQueryError : public Error {
 public:
  using Error::Error;
};

}  // namespace meshgap

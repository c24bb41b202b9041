#pragma once

#include <stdexcept>
#include <string>

namespace popscope {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data violates a documented format or invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Result is mathematically undefined for the given input (e.g. zero variance).
class UndefinedResultError : public Error {
 public:
  using Error::Error;
};

}  // namespace popscope

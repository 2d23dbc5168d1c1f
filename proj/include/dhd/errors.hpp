#pragma once

#include <stdexcept>
#include <string>

namespace dhd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (embedding files, datasets, JSON configs).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A precondition on numeric input was violated (zero vector, k out of range, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace dhd

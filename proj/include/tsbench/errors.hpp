#pragma once

#include <stdexcept>
#include <string>

namespace tsbench {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Two series (or aligned vectors) of different lengths were combined.
struct LengthMismatch : Error {
  LengthMismatch(std::size_t a, std::size_t b)
      : Error("length mismatch: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

/// A data file could not be parsed; message carries file and line number.
struct ParseError : Error {
  using Error::Error;
};

/// File or directory I/O failed.
struct IoError : Error {
  using Error::Error;
};

/// A report was requested for methods absent from the score store.
struct MissingMethod : Error {
  using Error::Error;
};

}  // namespace tsbench

#pragma once

#include <stdexcept>
#include <string>

namespace xdq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument is outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The input is fine but the formula being applied does not cover it.
class NotApplicable : public Error {
 public:
  using Error::Error;
};

/// An internal consistency check failed; indicates a bug or corrupt data.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// The dataset does not cover the requested level.
class IncompleteDataError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. `line()` is 1-based, 0 if not tied to a line.
class DataFormatError : public Error {
 public:
  DataFormatError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class NetworkError : public Error {
 public:
  using Error::Error;
};

class UnknownLabelError : public Error {
 public:
  using Error::Error;
};

/// The remote service answered, but not with the expected record shape.
class SchemaDriftError : public Error {
 public:
  using Error::Error;
};

}  // namespace xdq

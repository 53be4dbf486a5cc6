#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tenseq {

// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller supplied parameters outside the supported domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Malformed external input; line() is 1-based, 0 when not line oriented.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(line == 0 ? message : "line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A documented precondition does not hold.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// A structure (tree decomposition, ordering) failed validation.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A randomized generator exhausted its rejection budget.
class GenerationError : public Error {
 public:
  using Error::Error;
};

// A computation would exceed a configured memory cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// An operation declined to run on its input (size caps, mismatched artifacts).
class RefusalError : public Error {
 public:
  using Error::Error;
};

}  // namespace tenseq

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace magdiv {

// Base of every error raised by the library. `kind()` is a stable
// machine-readable tag used in structured CLI error reports.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string &what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string &kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

// An input object violates one of its invariants.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string &what) : Error("ValidationError", what) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string &what) : Error("DimensionMismatch", what) {}
};

// A symmetric factorization met a nonpositive pivot.
class NotPositiveDefinite : public Error {
 public:
  explicit NotPositiveDefinite(const std::string &what) : Error("NotPositiveDefinite", what) {}
};

// A solve finished but its residual is out of tolerance.
class InaccurateSolve : public Error {
 public:
  explicit InaccurateSolve(const std::string &what) : Error("InaccurateSolve", what) {}
};

class NoConvergence : public Error {
 public:
  explicit NoConvergence(const std::string &what) : Error("NoConvergence", what) {}
};

class TooLarge : public Error {
 public:
  explicit TooLarge(const std::string &what) : Error("TooLarge", what) {}
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string &what)
      : Error("ParseError", "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string &what) : Error("IoError", what) {}
};

}  // namespace magdiv

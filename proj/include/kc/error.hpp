#pragma once

#include <stdexcept>
#include <string>

namespace kc {

// Error categories double as CLI exit codes.
enum class ErrorKind : int {
  validation = 1,
  io = 2,
  internal = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

// Malformed input that cannot be recovered row-by-row (e.g. a missing column).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(ErrorKind::validation, what) {}
};

// A measure evaluated outside its domain (empty graph, n < 2, zero marginal ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::validation, what) {}
};

// Unknown node or document id.
class LookupError : public Error {
 public:
  explicit LookupError(const std::string& what) : Error(ErrorKind::validation, what) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(ErrorKind::validation, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

class InvariantError : public Error {
 public:
  explicit InvariantError(const std::string& what) : Error(ErrorKind::internal, what) {}
};

}  // namespace kc

#pragma once

#include <stdexcept>
#include <string>

namespace simplexlab {

enum class ErrorKind {
  precondition,    // caller supplied inputs outside an operation's domain
  resource_limit,  // node/output caps, or work that would not fit in memory
  overflow,        // checked integer arithmetic
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(ErrorKind::precondition, what) {}
};

class ResourceLimitError : public Error {
 public:
  explicit ResourceLimitError(const std::string& what) : Error(ErrorKind::resource_limit, what) {}
};

class OverflowError : public Error {
 public:
  explicit OverflowError(const std::string& what) : Error(ErrorKind::overflow, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw PreconditionError(what);
}

/// Process exit code used by the command-line tool for each error kind.
inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::precondition: return 2;
    case ErrorKind::resource_limit: return 3;
    case ErrorKind::overflow: return 3;
    case ErrorKind::io: return 4;
  }
  return 1;
}

}  // namespace simplexlab

#pragma once

#include <stdexcept>
#include <string>

namespace acforge {

// Failure categories, each mapped to a distinct CLI exit status.
enum class ErrorKind { InvalidInput, LimitExceeded, PreconditionViolated };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  int exit_code() const noexcept {
    switch (kind_) {
      case ErrorKind::InvalidInput: return 2;
      case ErrorKind::LimitExceeded: return 3;
      case ErrorKind::PreconditionViolated: return 4;
    }
    return 1;
  }

  const char* kind_name() const noexcept {
    switch (kind_) {
      case ErrorKind::InvalidInput: return "invalid-input";
      case ErrorKind::LimitExceeded: return "limit-exceeded";
      case ErrorKind::PreconditionViolated: return "precondition-violated";
    }
    return "error";
  }

 private:
  ErrorKind kind_;
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what)
      : Error(ErrorKind::InvalidInput, what) {}
};

class LimitError : public Error {
 public:
  explicit LimitError(const std::string& what)
      : Error(ErrorKind::LimitExceeded, what) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what)
      : Error(ErrorKind::PreconditionViolated, what) {}
};

}  // namespace acforge

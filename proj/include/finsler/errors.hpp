#pragma once

#include <stdexcept>
#include <string>

namespace finsler {

/// Base class of all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad expression text, bad metric file, unknown zoo id,
/// out-of-range index or parameter. The CLI maps this to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A mathematical guard failed at an evaluation point (sqrt of a negative
/// number, s outside the validity interval, singular g, ...). Carries the
/// name of the violated guard. The CLI maps this to exit code 3.
class DomainError : public Error {
 public:
  DomainError(std::string guard, const std::string& what)
      : Error(guard + ": " + what), guard_(std::move(guard)) {}

  const std::string& guard() const noexcept { return guard_; }

 private:
  std::string guard_;
};

/// A metric's declared property failed numerical validation. The CLI maps
/// this to exit code 4.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace finsler

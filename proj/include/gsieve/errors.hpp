#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gsieve {

enum class ErrorKind {
  HeisenbergViolation,
  NotPositive,
  InvalidShape,
  InvalidArea,
  InvalidParameter,
  PositivityViolation,
  NonDissipative,
  NegativeTime,
};

std::string_view to_string(ErrorKind kind);

// Raised whenever a value breaks a physical or domain invariant.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gsieve

#pragma once

#include <stdexcept>
#include <string>

namespace lobench {

enum class ErrorCode {
  invalid_argument,
  unsolvable_portfolio,
  representation,
  family_undefined,
  enumeration_too_large,
  episode_finished,
  invalid_action,
  undefined_metric,
  training_diverged,
  parse,
};

/// Library-wide error. `exit_code()` is the process code the CLI maps it to:
/// 2 for anything caused by invalid input, 3 when an enumeration exceeds its
/// cap, 4 when training diverges.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  int exit_code() const noexcept {
    switch (code_) {
      case ErrorCode::enumeration_too_large:
        return 3;
      case ErrorCode::training_diverged:
        return 4;
      default:
        return 2;
    }
  }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void throw_error(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace lobench

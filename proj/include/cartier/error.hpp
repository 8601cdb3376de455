#pragma once

#include <stdexcept>
#include <string>

namespace cartier {

enum class ErrorCode {
  InvalidInput,
  RingMismatch,
  NotSubmodule,
  NotStable,
  NotRegularElement,
  NonDegenerate,
  NotFRegular,
  CapExceeded,
  VerificationFailed,
};

const char* error_code_name(ErrorCode code);

/// Single exception type for the library; `code()` is machine readable.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the Frobenius level cap and the stabilization loops.
class StabilizationCapExceeded : public Error {
 public:
  explicit StabilizationCapExceeded(const std::string& message)
      : Error(ErrorCode::CapExceeded, message) {}
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace cartier

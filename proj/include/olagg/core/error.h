#pragma once

#include <stdexcept>
#include <string>

namespace olagg {

enum class ErrorCode {
  kInvalidArgument,
  kTypeMismatch,
  kDivisionByZero,
  kParse,
  kMalformedBytes,
  kVersionMismatch,
  kNotFound,
  kAlreadyTerminal,
  kAlreadyExists,
  kCapacityExceeded,
  kIo,
  kRuntime,
};

const char* error_code_name(ErrorCode code);

// Validation errors are caused by user input (plans, options, files) and map
// to exit code 2 in the CLI and HTTP 400 in the service.
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace olagg

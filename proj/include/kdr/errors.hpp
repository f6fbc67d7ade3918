#ifndef KDR_ERRORS_HPP
#define KDR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace kdr {

// Stable error names. These are part of the public surface: the CLI exits
// with the name on stderr and the C API maps them 1:1 to status codes.
enum class ErrorCode {
  NonSymmetric,
  ConvergenceFailure,
  NotPositiveDefinite,
  DimensionMismatch,
  AlreadyCentered,
  MissingFeatures,
  SizeMismatch,
  DegenerateSample,
  TooFewClasses,
  SingularWithin,
  SingleClass,
  NonConvergence,
  LengthMismatch,
  MissingSubjectIds,
  SingleClassFold,
  InvalidArgument,
  IoError,
  ParseError,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace kdr

#endif

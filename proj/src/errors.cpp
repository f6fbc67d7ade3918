#include "kdr/errors.hpp"

namespace kdr {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonSymmetric: return "NonSymmetric";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::AlreadyCentered: return "AlreadyCentered";
    case ErrorCode::MissingFeatures: return "MissingFeatures";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::DegenerateSample: return "DegenerateSample";
    case ErrorCode::TooFewClasses: return "TooFewClasses";
    case ErrorCode::SingularWithin: return "SingularWithin";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::MissingSubjectIds: return "MissingSubjectIds";
    case ErrorCode::SingleClassFold: return "SingleClassFold";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "UnknownError";
}

}  // namespace kdr

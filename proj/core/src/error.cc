#include "emoint/error.h"

namespace emoint {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kEmptyClass: return "EmptyClass";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kOrderMismatch: return "OrderMismatch";
    case ErrorCode::kNoOrderedPairs: return "NoOrderedPairs";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kSchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kUnknownEmotion: return "UnknownEmotion";
    case ErrorCode::kMissingFile: return "MissingFile";
    case ErrorCode::kInvalidDistribution: return "InvalidDistribution";
    case ErrorCode::kDegenerateClusters: return "DegenerateClusters";
  }
  return "Unknown";
}

bool IsIoError(ErrorCode code) {
  return code == ErrorCode::kNotFound || code == ErrorCode::kIoError ||
         code == ErrorCode::kMissingFile;
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace emoint

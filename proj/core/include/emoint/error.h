#ifndef EMOINT_ERROR_H_
#define EMOINT_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace emoint {

enum class ErrorCode {
  kNotFound,
  kIoError,
  kUnsupportedFormat,
  kInvalidParams,
  kEmptyInput,
  kEmptyClass,
  kDimensionMismatch,
  kOrderMismatch,
  kNoOrderedPairs,
  kNonFinite,
  kSchemaVersionMismatch,
  kParseError,
  kDuplicateId,
  kUnknownEmotion,
  kMissingFile,
  kInvalidDistribution,
  kDegenerateClusters,
};

std::string_view ErrorCodeName(ErrorCode code);

// True for failures caused by the filesystem rather than by the data.
bool IsIoError(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace emoint

#endif  // EMOINT_ERROR_H_

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hprec {

enum class ErrorCode {
  NotHermitian,
  NotPositiveDefinite,
  DimensionMismatch,
  ConvergenceFailure,
  InvalidArgument,
  AlreadyNormalized,
  NotNormalized,
  IoError,
  FormatError,
  BadSplit,
  EmptyTrajectory,
  EmptySet,
  ZeroPower,
  DegenerateParameters,
  EmptyBatch,
  EmptyDataset,
  StepTooLarge,
  ShapeMismatch,
};

std::string_view to_string(ErrorCode code) noexcept;

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const char* what) {
  if (!cond) fail(code, what);
}

}  // namespace hprec

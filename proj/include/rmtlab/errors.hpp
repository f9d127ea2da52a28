#pragma once

#include <stdexcept>
#include <string>

namespace rmtlab {

// Errors that signal misuse of an operation's contract.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Errors raised when a numerical contract cannot be met.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidLaw : UsageError {
  using UsageError::UsageError;
};

// Truncation threshold removes essentially all mass: sd of the clipped
// variable fell below 1e-6, so rescaling would blow up.
struct DegenerateTruncation : NumericError {
  using NumericError::NumericError;
};

struct IndexOutOfRange : UsageError {
  using UsageError::UsageError;
};

// QL sweep budget (50 per eigenvalue) exhausted.
struct NoConvergence : NumericError {
  using NumericError::NumericError;
};

struct MixedDimensions : UsageError {
  using UsageError::UsageError;
};

// Dense resolvent requested beyond the n <= 1024 cap.
struct DimensionCap : UsageError {
  using UsageError::UsageError;
};

// A pivot vanished while factoring a shifted system; with Im z != 0 this
// indicates a bug rather than bad input.
struct SolveFailure : NumericError {
  using NumericError::NumericError;
};

struct EnumerationCap : UsageError {
  using UsageError::UsageError;
};

struct TooFewPoints : UsageError {
  using UsageError::UsageError;
};

struct NonpositiveDelta : UsageError {
  using UsageError::UsageError;
};

// Spectral window shrank to nothing (eps >= 2) for the chosen constants.
struct EmptyDomain : UsageError {
  using UsageError::UsageError;
};

struct OutsideDomain : UsageError {
  using UsageError::UsageError;
};

// Transform branch is undefined on the support interval of the limit law.
struct BranchUndefined : UsageError {
  using UsageError::UsageError;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace rmtlab

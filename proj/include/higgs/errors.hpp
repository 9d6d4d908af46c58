#pragma once

#include <stdexcept>
#include <string>

namespace higgs {

// Base for recoverable computation failures (CLI exit code 2).
struct ComputationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotGeneric : ComputationError {
  using ComputationError::ComputationError;
};
struct RankTooSmall : ComputationError {
  using ComputationError::ComputationError;
};
struct FieldTooSmall : ComputationError {
  using ComputationError::ComputationError;
};
struct BudgetExceeded : ComputationError {
  using ComputationError::ComputationError;
};
struct InterpolationInconsistent : ComputationError {
  using ComputationError::ComputationError;
};
struct SearchExhausted : ComputationError {
  using ComputationError::ComputationError;
};
struct NotUnique : ComputationError {
  using ComputationError::ComputationError;
};
struct NotInSpan : ComputationError {
  using ComputationError::ComputationError;
};
struct NoPathWithinFloor : ComputationError {
  using ComputationError::ComputationError;
};
struct WindowTooSmall : ComputationError {
  using ComputationError::ComputationError;
};

}  // namespace higgs

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pinw {

enum class ErrorCode {
  Degenerate,
  NeedsReorder,
  CollapseToSegment,
  RefinementTooDeep,
  NotRefined,
  DeltaProperty1Violation,
  DeltaProperty2Violation,
  HangingNodeOffEdge,
  LTooLarge,
  NonConforming,
  OutsideDomain,
  Parse,
  InvalidArgument,
};

/// Stable snake_case name, e.g. "delta_property1_violation".
std::string_view to_string(ErrorCode code);

/// True for errors that indicate a broken algorithmic invariant rather than
/// bad user input. The CLI maps these to exit code 3.
bool is_invariant_violation(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pinw

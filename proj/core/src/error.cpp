#include "pinw/error.hpp"

namespace pinw {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Degenerate: return "degenerate";
    case ErrorCode::NeedsReorder: return "needs_reorder";
    case ErrorCode::CollapseToSegment: return "collapse_to_segment";
    case ErrorCode::RefinementTooDeep: return "refinement_too_deep";
    case ErrorCode::NotRefined: return "not_refined";
    case ErrorCode::DeltaProperty1Violation: return "delta_property1_violation";
    case ErrorCode::DeltaProperty2Violation: return "delta_property2_violation";
    case ErrorCode::HangingNodeOffEdge: return "hanging_node_off_edge";
    case ErrorCode::LTooLarge: return "l_too_large";
    case ErrorCode::NonConforming: return "non_conforming";
    case ErrorCode::OutsideDomain: return "outside_domain";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::InvalidArgument: return "invalid_argument";
  }
  return "unknown";
}

bool is_invariant_violation(ErrorCode code) {
  switch (code) {
    case ErrorCode::CollapseToSegment:
    case ErrorCode::DeltaProperty1Violation:
    case ErrorCode::DeltaProperty2Violation:
    case ErrorCode::HangingNodeOffEdge:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace pinw

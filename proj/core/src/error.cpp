#include "cwphase/error.hpp"

namespace cwphase {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_params: return "invalid-params";
    case ErrorCode::cap_exceeded: return "cap-exceeded";
    case ErrorCode::no_convergence: return "no-convergence";
    case ErrorCode::outside_window: return "outside-window";
    case ErrorCode::missing_branch: return "missing-branch";
    case ErrorCode::no_spinodal: return "no-spinodal";
    case ErrorCode::no_bracket: return "no-bracket";
    case ErrorCode::branch_required: return "branch-required";
    case ErrorCode::quadrature_no_convergence: return "quadrature-no-convergence";
    case ErrorCode::cap_escalation_failed: return "cap-escalation-failed";
  }
  return "unknown";
}

}  // namespace cwphase

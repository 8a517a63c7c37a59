#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cwphase {

enum class ErrorCode {
  invalid_params,
  cap_exceeded,
  no_convergence,
  outside_window,
  missing_branch,
  no_spinodal,
  no_bracket,
  branch_required,
  quadrature_no_convergence,
  cap_escalation_failed,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every solver failure surfaces as this exception; `code()` is stable and
/// machine-readable, `what()` carries the human-readable context.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cwphase

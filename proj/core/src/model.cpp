#include "cwphase/model.hpp"

#include <cmath>
#include <string>

#include "cwphase/error.hpp"

namespace cwphase {

void ModelParams::validate() const {
  if (!(std::isfinite(a) && a > 1.0)) {
    throw Error(ErrorCode::invalid_params,
                "repulsion ratio a must exceed 1, got " + std::to_string(a));
  }
  if (!(std::isfinite(upsilon) && upsilon >= 0.0)) {
    throw Error(ErrorCode::invalid_params,
                "cell volume upsilon must be non-negative, got " + std::to_string(upsilon));
  }
}

void ThermoPoint::validate(bool allow_decoupled) const {
  const bool p_ok = allow_decoupled ? p >= 0.0 : p > 0.0;
  if (!(std::isfinite(p) && p_ok)) {
    throw Error(ErrorCode::invalid_params, "attraction p must be positive, got " + std::to_string(p));
  }
  if (!std::isfinite(mu)) {
    throw Error(ErrorCode::invalid_params, "chemical potential mu must be finite");
  }
}

void SeriesAccuracy::validate() const {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
    throw Error(ErrorCode::invalid_params, "rel_tol must lie in (0, 1)");
  }
  if (!(min_terms > 0 && min_terms <= max_terms)) {
    throw Error(ErrorCode::invalid_params, "need 0 < min_terms <= max_terms");
  }
}

}  // namespace cwphase

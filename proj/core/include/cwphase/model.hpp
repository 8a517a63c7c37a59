#pragma once

namespace cwphase {

/// Fixed model constants: the repulsion/attraction ratio `a` and the cell
/// volume `upsilon`. `upsilon == 0` is accepted as the empty-cell limit.
struct ModelParams {
  double a = 1.2;
  double upsilon = 12.0;

  /// Throws Error{invalid_params} unless a > 1 and upsilon >= 0.
  void validate() const;
};

/// A point (p, mu) of the thermodynamic half-plane.
struct ThermoPoint {
  double p = 1.0;
  double mu = 0.0;

  /// Throws Error{invalid_params} unless p > 0 (p >= 0 with allow_decoupled).
  void validate(bool allow_decoupled = false) const;
};

/// Truncation control for the damped exponential series.
struct SeriesAccuracy {
  double rel_tol = 1e-15;
  int min_terms = 16;
  int max_terms = 20000;

  void validate() const;
};

/// Root residual and curvature thresholds shared by the solvers.
inline constexpr double kRootTol = 1e-12;
inline constexpr double kKindTol = 1e-8;

}  // namespace cwphase

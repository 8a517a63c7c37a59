#pragma once

#include <limits>
#include <vector>

#include "cwphase/model.hpp"
#include "cwphase/stationary.hpp"

namespace cwphase {

enum class PhaseStatus { single_phase, coexistence_candidate, degenerate_critical };

const char* to_string(PhaseStatus status) noexcept;

struct PhaseClassification {
  PhaseStatus status = PhaseStatus::single_phase;
  StationaryPoint global_max;
  /// Second-highest maximum; meaningful only when gap is finite.
  StationaryPoint runner_up;
  std::vector<StationaryPoint> all_points;
  /// E(best maximum) - E(runner-up maximum); +inf with a single maximum.
  double gap = std::numeric_limits<double>::infinity();
};

struct ClassifyOptions {
  /// Absolute tie tolerance on E. Non-positive selects 1e-9 * max(1, |E|).
  double tie_tol = 0.0;
};

PhaseClassification classify(const ThermoPoint& pt, const ModelParams& params, const SeriesAccuracy& acc = {},
                             const ClassifyOptions& opts = {});

/// The two competing maxima of E on the line l_p: `low` lies left of the
/// spinodal window (x <= x_lo), `high` right of it (x >= x_hi). When mu is
/// just outside the metastable window the branch that has vanished is
/// represented by the spinodal point where it merged with the middle branch.
struct BranchMaxima {
  StationaryPoint low;
  StationaryPoint high;
};

/// Slack, relative to the window width, within which mu may lie outside
/// (mu_bottom, mu_top) and still be given a D value.
inline constexpr double kWindowSlackRel = 1e-3;

BranchMaxima branch_maxima(double p, double mu, const SpinodalInterval& window, const ModelParams& params,
                           const SeriesAccuracy& acc = {});

/// Maxwell function D(mu) = E(high branch) - E(low branch); strictly increasing.
double d_of_mu(double p, double mu, const ModelParams& params, const SeriesAccuracy& acc = {});
double d_of_mu(double p, double mu, const SpinodalInterval& window, const ModelParams& params,
               const SeriesAccuracy& acc = {});

struct CoexistenceResult {
  double mu_c = 0.0;
  double y_low = 0.0;
  double y_high = 0.0;
  double pressure = 0.0;
  SpinodalInterval window;
  double d_residual = 0.0;
};

/// Root of D in the metastable window. Throws no_spinodal when p <= p_c.
CoexistenceResult coexistence_mu(double p, const ModelParams& params, const SeriesAccuracy& acc = {});

struct CriticalPoint {
  double p_c = 0.0;
  double x_c = 0.0;
  double y_c = 0.0;
  double n_c = 0.0;
  /// The 64-point scan of max p*phi2 - 1 over the bracket changed sign more than once.
  bool multi_crossing = false;
};

CriticalPoint critical_point(const ModelParams& params, const SeriesAccuracy& acc = {});

/// sup over all x of p*phi2(x, p): the primary hump, the layering humps at
/// higher occupancy, and their large-occupancy limit.
double curvature_supremum(double p, const ModelParams& params, const SeriesAccuracy& acc = {});

/// True iff sup_x p*phi2 < 1, so every mu on l_p has a unique nondegenerate maximum.
bool line_is_single_phase(double p, const ModelParams& params, const SeriesAccuracy& acc = {});

}  // namespace cwphase

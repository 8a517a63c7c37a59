#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cwphase/model.hpp"

namespace cwphase {

/// Which pure phase to use at a coexistence point.
enum class Branch { low, high };

/// Per-cell occupation law Q(n) of the pure phase selected at (p, mu).
struct OccupationDistribution {
  std::vector<double> probs;
  double y_bar = 0.0;
  double mean = 0.0;
  double truncation_mass = 0.0;
};

enum class IsothermBranch { stable, metastable, unstable };

const char* to_string(IsothermBranch branch) noexcept;

struct IsothermPoint {
  double y = 0.0;
  double n = 0.0;
  double mu = 0.0;
  double pressure = 0.0;
  IsothermBranch branch = IsothermBranch::stable;
  /// Replaced by the Maxwell tie line (pressure and mu set to coexistence values).
  bool on_tie_line = false;
};

/// Order parameter of the phase at pt: the global maximum of E, or the
/// requested side at a coexistence point (branch_required otherwise).
double order_parameter(const ThermoPoint& pt, const ModelParams& params, const SeriesAccuracy& acc = {},
                       std::optional<Branch> branch = std::nullopt);

/// Limiting pressure P = E(y_bar)/upsilon. p == 0 gives the decoupled value
/// phi(mu, 0)/upsilon; upsilon == 0 gives 0.
double pressure(const ThermoPoint& pt, const ModelParams& params, const SeriesAccuracy& acc = {});

/// Mean occupation n_bar = y_bar / p.
double density(const ThermoPoint& pt, const ModelParams& params, const SeriesAccuracy& acc = {},
               std::optional<Branch> branch = std::nullopt);

OccupationDistribution occupation_distribution(const ThermoPoint& pt, const ModelParams& params,
                                               const SeriesAccuracy& acc = {},
                                               std::optional<Branch> branch = std::nullopt);

/// Equation of state along l_p, parametrized by y. With `maxwell` and a
/// nonempty spinodal, points strictly between the coexisting maxima are put
/// on the flat tie line.
std::vector<IsothermPoint> isotherm(double p, const ModelParams& params, std::span<const double> y_grid,
                                    bool maxwell, const SeriesAccuracy& acc = {});

}  // namespace cwphase

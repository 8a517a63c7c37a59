#include "cwphase/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cwphase/error.hpp"
#include "cwphase/phase.hpp"
#include "cwphase/series.hpp"
#include "cwphase/stationary.hpp"

namespace cwphase {

const char* to_string(IsothermBranch branch) noexcept {
  switch (branch) {
    case IsothermBranch::stable: return "stable";
    case IsothermBranch::metastable: return "metastable";
    case IsothermBranch::unstable: return "unstable";
  }
  return "unknown";
}

double order_parameter(const ThermoPoint& pt, const ModelParams& params, const SeriesAccuracy& acc,
                       std::optional<Branch> branch) {
  const PhaseClassification c = classify(pt, params, acc);
  if (c.status != PhaseStatus::coexistence_candidate) return c.global_max.y;
  if (!branch) {
    throw Error(ErrorCode::branch_required, "(p, mu) = (" + std::to_string(pt.p) + ", " + std::to_string(pt.mu) +
                                                ") is a coexistence point; choose the low or high branch");
  }

  const double a = c.global_max.y;
  const double b = c.runner_up.y;
  return *branch == Branch::low ? std::min(a, b) : std::max(a, b);
}

double pressure(const ThermoPoint& pt, const ModelParams& params, const SeriesAccuracy& acc) {
  pt.validate(/*allow_decoupled=*/true);
  params.validate();
  if (params.upsilon == 0.0) return 0.0;
  if (pt.p == 0.0) return moment_sums(pt.mu, params, 0.0, acc).phi / params.upsilon;
  return classify(pt, params, acc).global_max.e_value / params.upsilon;
}

double density(const ThermoPoint& pt, const ModelParams& params, const SeriesAccuracy& acc,
               std::optional<Branch> branch) {
  pt.validate();
  return order_parameter(pt, params, acc, branch) / pt.p;
}

OccupationDistribution occupation_distribution(const ThermoPoint& pt, const ModelParams& params,
                                               const SeriesAccuracy& acc, std::optional<Branch> branch) {
  pt.validate();
  OccupationDistribution out;
  out.y_bar = order_parameter(pt, params, acc, branch);
  const WeightTable table = normalized_weights(out.y_bar + pt.mu, params, pt.p, acc);
  out.probs = table.probs;
  out.truncation_mass = table.tail_mass;
  long double mean = 0.0L;
  for (std::size_t n = 0; n < out.probs.size(); ++n) mean += static_cast<long double>(n) * out.probs[n];
  out.mean = static_cast<double>(mean);
  return out;
}

std::vector<IsothermPoint> isotherm(double p, const ModelParams& params, std::span<const double> y_grid,
                                    bool maxwell, const SeriesAccuracy& acc) {
  params.validate();
  acc.validate();
  if (!(std::isfinite(p) && p > 0.0)) throw Error(ErrorCode::invalid_params, "isotherm needs p > 0");
  for (std::size_t i = 0; i < y_grid.size(); ++i) {
    if (!(y_grid[i] > 0.0) || (i > 0 && !(y_grid[i] > y_grid[i - 1]))) {
      throw Error(ErrorCode::invalid_params, "isotherm y-grid must be positive and strictly increasing");
    }
  }

  std::optional<CoexistenceResult> coex;
  if (spinodal(p, params, acc)) coex = coexistence_mu(p, params, acc);

  std::vector<IsothermPoint> out;
  out.reserve(y_grid.size());
  for (const double y : y_grid) {
    const double x = x_of_y(y, p, params, acc);
    const MomentSums ms = moment_sums(x, params, p, acc);
    IsothermPoint pt;
    pt.y = y;
    pt.n = y / p;
    pt.mu = x - y;
    pt.pressure = (-y * y / (2.0 * p) + ms.phi) / params.upsilon;
    const bool inside_coexistence = coex && y > coex->y_low && y < coex->y_high;
    if (p * ms.phi2 > 1.0) {
      pt.branch = IsothermBranch::unstable;
    } else if (inside_coexistence) {
      pt.branch = IsothermBranch::metastable;
    }
    if (maxwell && inside_coexistence) {
      pt.pressure = coex->pressure;
      pt.mu = coex->mu_c;
      pt.on_tie_line = true;
    }
    out.push_back(pt);
  }
  return out;
}

}  // namespace cwphase

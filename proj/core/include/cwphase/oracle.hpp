#pragma once

#include <span>
#include <vector>

#include "cwphase/model.hpp"

namespace cwphase {

/// Exact finite-N grand partition function over N cells.
struct FiniteNResult {
  int n_cells = 0;
  int n_max = 0;
  double log_xi = 0.0;
  double p_n = 0.0;  ///< ln(Xi_N) / (upsilon N)
  double cap_sensitivity = 0.0;
};

/// ln pi(n, mu) = n ln(upsilon) - ln(n!) + mu n - a p n^2 / 2.
double cell_weight(int n, const ThermoPoint& pt, const ModelParams& params);

/// ln Xi_N with every cell occupation capped at n_max. Cells are grouped by
/// total particle number M: Xi_N = sum_M exp(p M^2 / 2N) c_N(M), with c_N the
/// N-fold convolution of pi, carried out in the log domain.
double log_xi_truncated(int n_cells, const ThermoPoint& pt, const ModelParams& params, int n_max);

/// log_xi_truncated with the cap doubled until moving it by 8 changes ln Xi_N
/// by at most 1e-10 relative. n_max <= 0 picks the starting cap heuristically.
FiniteNResult exact_log_xi(int n_cells, const ThermoPoint& pt, const ModelParams& params, int n_max = 0);

/// ln Xi_N from the one-dimensional integral sqrt(N / 2 pi p) * int exp(N E(y)) dy,
/// by adaptive Gauss-Kronrod quadrature.
double laplace_log_xi(int n_cells, const ThermoPoint& pt, const ModelParams& params,
                      const SeriesAccuracy& acc = {});

struct ConvergenceRow {
  int n_cells = 0;
  double p_n = 0.0;
  double p_limit = 0.0;
  double gap = 0.0;  ///< p_n - p_limit
};

std::vector<ConvergenceRow> convergence_report(const ThermoPoint& pt, const ModelParams& params,
                                               std::span<const int> n_list, const SeriesAccuracy& acc = {});

}  // namespace cwphase

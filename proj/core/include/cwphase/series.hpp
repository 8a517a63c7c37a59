#pragma once

#include <vector>

#include "cwphase/model.hpp"

namespace cwphase {

/// Cumulants of the occupation weights
///   w_n = upsilon^n / n! * exp(x n - a p n^2 / 2),  n = 0, 1, ...
/// `phi` is ln(sum w_n); phi1..phi3 are the mean, variance and third
/// central moment of the normalized weights, i.e. successive x-derivatives
/// of phi.
struct MomentSums {
  double phi = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;
  double phi3 = 0.0;
  int n_peak = 0;
  int n_terms = 1;
};

/// ln w_n. Returns -inf for n > 0 when upsilon == 0.
double log_weight(int n, double x, double p, const ModelParams& params);

/// Index of the largest weight. The log-weight is concave in n, so the
/// first index whose forward difference is non-positive is the mode.
int peak_index(double x, double p, const ModelParams& params);

/// Log-sum-exp evaluation of phi and its cumulants, truncated once terms
/// fall below acc.rel_tol of the peak with at least acc.min_terms examined
/// on each side of it. Throws cap_exceeded past acc.max_terms.
MomentSums moment_sums(double x, const ModelParams& params, double p,
                       const SeriesAccuracy& acc = {});

/// Normalized weights w_n / sum w over n = 0..last, where `last` is the
/// upper truncation index of moment_sums. `tail_mass` is the relative mass
/// beyond `last`.
struct WeightTable {
  std::vector<double> probs;
  double tail_mass = 0.0;
};

WeightTable normalized_weights(double x, const ModelParams& params, double p,
                               const SeriesAccuracy& acc = {});

/// Effective potential E(y) = -y^2/(2p) + phi(y + mu, p).
double big_e(double y, const ThermoPoint& pt, const ModelParams& params,
             const SeriesAccuracy& acc = {});

/// dE/dy = -y/p + phi1(y + mu, p).
double e1(double y, const ThermoPoint& pt, const ModelParams& params,
          const SeriesAccuracy& acc = {});

/// d2E/dy2 = -1/p + phi2(y + mu, p).
double e2(double y, const ThermoPoint& pt, const ModelParams& params,
          const SeriesAccuracy& acc = {});

}  // namespace cwphase

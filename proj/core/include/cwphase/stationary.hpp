#pragma once

#include <optional>
#include <vector>

#include "cwphase/model.hpp"

namespace cwphase {

enum class PointKind { maximum, minimum, degenerate };

const char* to_string(PointKind kind) noexcept;

/// A root of dE/dy = 0, stored in both parametrizations (x = y + mu).
struct StationaryPoint {
  double x = 0.0;
  double y = 0.0;
  double e_value = 0.0;
  double curvature = 0.0;
  PointKind kind = PointKind::maximum;
  /// Set only in the empty-cell model, whose single root sits at y = 0.
  bool boundary = false;
};

/// The primary instability window of the line l_p: the x-interval on which
/// p*phi2 > 1, and its images under y = p*phi1(x) and mu = x - y.
struct SpinodalInterval {
  double x_lo = 0.0;
  double x_hi = 0.0;
  double y_lo = 0.0;
  double y_hi = 0.0;
  double mu_top = 0.0;     ///< local maximum of mu_bar, reached at y_lo
  double mu_bottom = 0.0;  ///< local minimum of mu_bar, reached at y_hi
  /// More than one crossing pair of p*phi2 = 1 inside the primary range.
  bool multi_well = false;
};

/// x-range holding the gas-liquid transition: from deep in the dilute tail
/// up to the point where the mean occupation reaches one particle per cell.
/// Above it the weights become layered and every integer crossover of the
/// mean produces its own curvature hump.
struct PrimaryRange {
  double x_floor = 0.0;
  double x_one = 0.0;
};

/// Maximum of p*phi2 over the primary range and where it is attained.
struct CurvaturePeak {
  double x = 0.0;
  double value = 0.0;
};

/// Unique x with p*phi1(x, p) = y. Throws no_convergence for y < 1e-12.
double x_of_y(double y, double p, const ModelParams& params, const SeriesAccuracy& acc = {});

/// mu_bar(y) = x_of_y(y) - y: the chemical potential at which y is stationary.
double mu_bar(double y, double p, const ModelParams& params, const SeriesAccuracy& acc = {});

/// Every root of dE/dy = 0 on the real line, sorted by x.
std::vector<StationaryPoint> stationary_points(const ThermoPoint& pt, const ModelParams& params,
                                               const SeriesAccuracy& acc = {});

/// Primary spinodal window, or nullopt when p*phi2 <= 1 throughout it.
std::optional<SpinodalInterval> spinodal(double p, const ModelParams& params,
                                         const SeriesAccuracy& acc = {});

/// p01 = exp(-x0 - 2 upsilon e^x0) / (a upsilon): below it p*phi2 <= 1/a for
/// every x <= x0.
double small_p_bound(double x0, const ModelParams& params);

PrimaryRange primary_range(double p, const ModelParams& params, const SeriesAccuracy& acc = {});

CurvaturePeak max_curvature(double p, const ModelParams& params, const SeriesAccuracy& acc = {});

/// Sorted x-values in (x_from, x_to) where p*phi2 crosses 1. Between two
/// consecutive crossings x - p*phi1(x) is monotone.
std::vector<double> curvature_crossings(double p, double x_from, double x_to,
                                        const ModelParams& params, const SeriesAccuracy& acc = {});

/// Builds the stationary point at x for the line through pt, classifying it
/// by curvature against kKindTol.
StationaryPoint make_stationary_point(double x, const ThermoPoint& pt, const ModelParams& params,
                                      const SeriesAccuracy& acc = {});

}  // namespace cwphase

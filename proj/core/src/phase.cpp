#include "cwphase/phase.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "cwphase/error.hpp"
#include "cwphase/series.hpp"
#include "inverse.hpp"
#include "numerics.hpp"

namespace cwphase {
namespace {

// Only a sign change of dE/dy from + to - makes a degenerate root a maximum;
// a double root (an inflection at a window edge) does not.
bool degenerate_is_maximum(const StationaryPoint& sp, const ThermoPoint& pt, const ModelParams& params,
                           const SeriesAccuracy& acc) {
  const double h = 1e-4 * std::max(1.0, std::abs(sp.y));
  return e1(sp.y - h, pt, params, acc) > 0.0 && e1(sp.y + h, pt, params, acc) < 0.0;
}

// Variance of the discrete Gaussian exp(-c (k - s)^2 / 2), k integer.
double discrete_gaussian_variance(double c, double s) {
  long double s0 = 0.0L;
  long double s1 = 0.0L;
  long double s2 = 0.0L;
  for (int k = -60; k <= 61; ++k) {
    const long double d = static_cast<long double>(k) - s;
    const long double w = std::exp(-0.5L * c * d * d);
    s0 += w;
    s1 += w * d;
    s2 += w * d * d;
  }
  const long double mean = s1 / s0;
  return static_cast<double>(s2 / s0 - mean * mean);
}

// Limit of the layering hump heights as the occupancy grows: the weights
// become a discrete Gaussian of curvature a*p around a moving centre.
double layering_limit(double p, const ModelParams& params) {
  const double c = params.a * p;
  if (c < 1.0) return 1.0 / params.a;  // lattice corrections below exp(-2 pi^2 / c)
  double best = 0.0;
  double best_s = 0.0;
  for (int i = 0; i <= 50; ++i) {
    const double s = i / 50.0;
    const double v = discrete_gaussian_variance(c, s);
    if (v > best) {
      best = v;
      best_s = s;
    }
  }
  const double v = detail::maximize([c](double t) { return discrete_gaussian_variance(c, t); },
                                    std::max(0.0, best_s - 0.02), std::min(1.0, best_s + 0.02))
                       .second;
  return p * std::max(best, v);
}

}  // namespace

const char* to_string(PhaseStatus status) noexcept {
  switch (status) {
    case PhaseStatus::single_phase: return "single_phase";
    case PhaseStatus::coexistence_candidate: return "coexistence_candidate";
    case PhaseStatus::degenerate_critical: return "degenerate_critical";
  }
  return "unknown";
}

PhaseClassification classify(const ThermoPoint& pt, const ModelParams& params, const SeriesAccuracy& acc,
                             const ClassifyOptions& opts) {
  PhaseClassification out;
  out.all_points = stationary_points(pt, params, acc);

  std::vector<const StationaryPoint*> maxima;
  for (const StationaryPoint& sp : out.all_points) {
    const bool is_max = sp.boundary || sp.kind == PointKind::maximum ||
                        (sp.kind == PointKind::degenerate && degenerate_is_maximum(sp, pt, params, acc));
    if (is_max) maxima.push_back(&sp);
  }
  if (maxima.empty()) {
    throw Error(ErrorCode::no_convergence, "classify: no maximum among the stationary points");
  }
  std::stable_sort(maxima.begin(), maxima.end(),
                   [](const StationaryPoint* l, const StationaryPoint* r) { return l->e_value > r->e_value; });

  out.global_max = *maxima.front();
  if (maxima.size() > 1) {
    out.runner_up = *maxima[1];
    out.gap = maxima[0]->e_value - maxima[1]->e_value;
  }

  const double tie = opts.tie_tol > 0.0 ? opts.tie_tol : 1e-9 * std::max(1.0, std::abs(out.global_max.e_value));
  if (maxima.size() > 1 && out.gap <= tie) {
    out.status = PhaseStatus::coexistence_candidate;
  } else if (out.global_max.kind == PointKind::degenerate) {
    out.status = PhaseStatus::degenerate_critical;
  } else {
    out.status = PhaseStatus::single_phase;
  }
  return out;
}

BranchMaxima branch_maxima(double p, double mu, const SpinodalInterval& window, const ModelParams& params,
                           const SeriesAccuracy& acc) {
  const ThermoPoint pt{p, mu};
  pt.validate();
  const double slack = kWindowSlackRel * (window.mu_top - window.mu_bottom);
  if (mu < window.mu_bottom - slack || mu > window.mu_top + slack) {
    throw Error(ErrorCode::outside_window, "mu = " + std::to_string(mu) + " lies outside the metastable window (" +
                                               std::to_string(window.mu_bottom) + ", " +
                                               std::to_string(window.mu_top) + ")");
  }

  const auto g = [&](double x) { return x - p * moment_sums(x, params, p, acc).phi1 - mu; };
  BranchMaxima out;

  if (mu <= window.mu_top) {
    const double left = std::min(mu - 10.0, window.x_lo - 1.0);
    const double x = detail::solve_bracketed(g, left, window.x_lo, g(left), window.mu_top - mu, "low branch");
    out.low = make_stationary_point(x, pt, params, acc);
  } else {
    out.low = make_stationary_point(window.x_lo, pt, params, acc);
  }

  if (mu >= window.mu_bottom) {
    // x - p*phi1 is increasing from x_hi up to the unit-occupancy point.
    double lo = window.x_hi;
    double g_lo = window.mu_bottom - mu;
    double hi = primary_range(p, params, acc).x_one;
    double g_hi = g(hi);
    for (int k = 0; g_hi <= 0.0; ++k) {
      if (k > 4000 || p * moment_sums(hi, params, p, acc).phi2 >= 1.0) {
        throw Error(ErrorCode::missing_branch, "high branch not found before the next instability");
      }
      lo = hi;
      g_lo = g_hi;
      hi += 0.05;
      g_hi = g(hi);
    }
    const double x = detail::solve_bracketed(g, lo, hi, g_lo, g_hi, "high branch");
    out.high = make_stationary_point(x, pt, params, acc);
  } else {
    out.high = make_stationary_point(window.x_hi, pt, params, acc);
  }
  return out;
}

double d_of_mu(double p, double mu, const SpinodalInterval& window, const ModelParams& params,
               const SeriesAccuracy& acc) {
  const BranchMaxima bm = branch_maxima(p, mu, window, params, acc);
  return bm.high.e_value - bm.low.e_value;
}

double d_of_mu(double p, double mu, const ModelParams& params, const SeriesAccuracy& acc) {
  const std::optional<SpinodalInterval> window = spinodal(p, params, acc);
  if (!window) {
    throw Error(ErrorCode::no_spinodal, "no metastable window at p = " + std::to_string(p));
  }
  return d_of_mu(p, mu, *window, params, acc);
}

CoexistenceResult coexistence_mu(double p, const ModelParams& params, const SeriesAccuracy& acc) {
  const std::optional<SpinodalInterval> window = spinodal(p, params, acc);
  if (!window) {
    throw Error(ErrorCode::no_spinodal, "no phase coexistence at p = " + std::to_string(p) +
                                            ": the line is below the critical point");
  }
  const auto d = [&](double mu) { return d_of_mu(p, mu, *window, params, acc); };

  // Branch roots are ill-conditioned at the window ends; evaluate at insets.
  const double width = window->mu_top - window->mu_bottom;
  double delta = 1e-6 * width;
  double lo = window->mu_bottom + delta;
  double hi = window->mu_top - delta;
  double d_lo = d(lo);
  double d_hi = d(hi);
  while ((d_lo >= 0.0 || d_hi <= 0.0) && delta > 1e-15 * width) {
    delta *= 1e-2;
    if (d_lo >= 0.0) {
      lo = window->mu_bottom + delta;
      d_lo = d(lo);
    }
    if (d_hi <= 0.0) {
      hi = window->mu_top - delta;
      d_hi = d(hi);
    }
  }
  if (d_lo >= 0.0 || d_hi <= 0.0) {
    throw Error(ErrorCode::no_convergence, "coexistence_mu: D does not change sign inside the window");
  }

  CoexistenceResult out;
  out.window = *window;
  out.mu_c = detail::solve_bracketed(d, lo, hi, d_lo, d_hi, "coexistence_mu");
  const BranchMaxima bm = branch_maxima(p, out.mu_c, *window, params, acc);
  out.y_low = bm.low.y;
  out.y_high = bm.high.y;
  out.d_residual = std::abs(bm.high.e_value - bm.low.e_value);
  out.pressure = 0.5 * (bm.low.e_value + bm.high.e_value) / params.upsilon;

  const double scale = std::max(1.0, std::abs(bm.low.e_value));
  if (out.d_residual > 1e-10 * scale) {
    throw Error(ErrorCode::no_convergence,
                "coexistence_mu: |D(mu_c)| = " + std::to_string(out.d_residual) + " above tolerance");
  }
  return out;
}

CriticalPoint critical_point(const ModelParams& params, const SeriesAccuracy& acc) {
  params.validate();
  acc.validate();
  if (params.upsilon == 0.0) {
    throw Error(ErrorCode::no_bracket, "the empty-cell model has no critical point");
  }
  const auto excess = [&](double p) { return max_curvature(p, params, acc).value - 1.0; };

  double lo = 0.5;
  double hi = 8.0;
  double f_lo = excess(lo);
  for (int k = 0; f_lo >= 0.0; ++k) {
    if (k > 60) throw Error(ErrorCode::no_bracket, "critical_point: no single-phase line found below p = 0.5");
    lo *= 0.5;
    f_lo = excess(lo);
  }
  double f_hi = excess(hi);
  for (int k = 0; f_hi <= 0.0; ++k) {
    if (k > 20) throw Error(ErrorCode::no_bracket, "critical_point: curvature never exceeds 1/p");
    hi *= 2.0;
    f_hi = excess(hi);
  }

  CriticalPoint out;
  constexpr int kScan = 64;
  int changes = 0;
  double prev = f_lo;
  for (int i = 1; i <= kScan; ++i) {
    const double p = lo + (hi - lo) * i / kScan;
    const double cur = i == kScan ? f_hi : excess(p);
    if ((prev < 0.0) != (cur < 0.0)) ++changes;
    prev = cur;
  }
  out.multi_crossing = changes > 1;

  out.p_c = detail::solve_bracketed(excess, lo, hi, f_lo, f_hi, "critical_point");
  out.x_c = max_curvature(out.p_c, params, acc).x;
  out.y_c = out.p_c * moment_sums(out.x_c, params, out.p_c, acc).phi1;
  out.n_c = out.y_c / out.p_c;
  return out;
}

double curvature_supremum(double p, const ModelParams& params, const SeriesAccuracy& acc) {
  params.validate();
  if (!(std::isfinite(p) && p > 0.0)) throw Error(ErrorCode::invalid_params, "needs p > 0");
  if (params.upsilon == 0.0) return 0.0;

  double sup = max_curvature(p, params, acc).value;

  // Layering humps between one and eight particles per cell.
  const double x_one = detail::x_of_mean(1.0, p, params, acc);
  const double x_eight = detail::x_of_mean(8.0, p, params, acc);
  const auto h = [&](double x) { return p * moment_sums(x, params, p, acc).phi2; };
  const int cells = std::max(400, static_cast<int>(std::ceil((x_eight - x_one) / 0.05)));
  double best_x = x_one;
  double best = h(x_one);
  for (int i = 1; i <= cells; ++i) {
    const double x = x_one + (x_eight - x_one) * i / cells;
    const double v = h(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  const double cell = (x_eight - x_one) / cells;
  const double v = detail::maximize(h, std::max(x_one, best_x - cell), std::min(x_eight, best_x + cell)).second;
  sup = std::max({sup, best, v});

  return std::max(sup, layering_limit(p, params));
}

bool line_is_single_phase(double p, const ModelParams& params, const SeriesAccuracy& acc) {
  return curvature_supremum(p, params, acc) < 1.0;
}

}  // namespace cwphase

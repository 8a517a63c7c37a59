#include "cwphase/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cwphase/error.hpp"
#include "cwphase/series.hpp"
#include "inverse.hpp"
#include "numerics.hpp"

namespace cwphase {
namespace {

constexpr double kGridStep = 0.05;
constexpr int kMinGridPoints = 200;
constexpr long kMaxGridPoints = 4'000'000;

struct CurvatureGrid {
  std::vector<double> xs;
  std::vector<double> hs;
};

CurvatureGrid sample_curvature(double p, double x_from, double x_to, const ModelParams& params,
                               const SeriesAccuracy& acc) {
  const double span = x_to - x_from;
  const long cells = std::max<long>(kMinGridPoints, static_cast<long>(std::ceil(span / kGridStep)));
  if (cells > kMaxGridPoints) {
    throw Error(ErrorCode::no_convergence,
                "curvature scan over [" + std::to_string(x_from) + ", " + std::to_string(x_to) +
                    "] needs too many grid points");
  }
  CurvatureGrid grid;
  grid.xs.resize(static_cast<std::size_t>(cells) + 1);
  grid.hs.resize(grid.xs.size());
  for (long i = 0; i <= cells; ++i) {
    const double x = i == cells ? x_to : x_from + span * static_cast<double>(i) / static_cast<double>(cells);
    grid.xs[i] = x;
    grid.hs[i] = p * moment_sums(x, params, p, acc).phi2;
  }
  return grid;
}

CurvaturePeak refine_peak(const CurvatureGrid& grid, double p, const ModelParams& params,
                          const SeriesAccuracy& acc) {
  const auto it = std::max_element(grid.hs.begin(), grid.hs.end());
  const auto i = static_cast<std::size_t>(it - grid.hs.begin());
  const double lo = grid.xs[i == 0 ? 0 : i - 1];
  const double hi = grid.xs[std::min(i + 1, grid.xs.size() - 1)];
  const auto h = [&](double x) { return p * moment_sums(x, params, p, acc).phi2; };
  const auto [x, value] = detail::maximize(h, lo, hi);
  if (value >= *it) return {x, value};
  return {grid.xs[i], *it};
}

}  // namespace

const char* to_string(PointKind kind) noexcept {
  switch (kind) {
    case PointKind::maximum: return "maximum";
    case PointKind::minimum: return "minimum";
    case PointKind::degenerate: return "degenerate";
  }
  return "unknown";
}

namespace detail {

double x_of_mean(double mean, double p, const ModelParams& params, const SeriesAccuracy& acc) {
  const auto residual = [&](double x) { return moment_sums(x, params, p, acc).phi1 - mean; };

  // phi1 <= upsilon e^x, so the Poisson guess sits at or below the root.
  double lo = std::log(mean / params.upsilon);
  double f_lo = residual(lo);
  for (int k = 0; f_lo > 0.0; ++k) {
    if (k > 200) throw Error(ErrorCode::no_convergence, "x_of_y: lower bracket expansion failed");
    lo -= std::ldexp(1.0, k);
    f_lo = residual(lo);
  }
  double hi = lo + 1.0;
  double f_hi = residual(hi);
  for (int k = 1; f_hi < 0.0; ++k) {
    if (k > 200) throw Error(ErrorCode::no_convergence, "x_of_y: upper bracket expansion failed");
    lo = hi;
    f_lo = f_hi;
    hi += std::ldexp(1.0, k);
    f_hi = residual(hi);
  }
  return solve_bracketed(residual, lo, hi, f_lo, f_hi, "x_of_y");
}

}  // namespace detail

double x_of_y(double y, double p, const ModelParams& params, const SeriesAccuracy& acc) {
  params.validate();
  if (!(std::isfinite(p) && p > 0.0)) {
    throw Error(ErrorCode::invalid_params, "x_of_y needs p > 0");
  }
  if (!(std::isfinite(y) && y > 0.0)) {
    throw Error(ErrorCode::invalid_params, "x_of_y needs y > 0, got " + std::to_string(y));
  }
  if (y < 1e-12 || params.upsilon == 0.0) {
    throw Error(ErrorCode::no_convergence,
                "x_of_y: inverse diverges to -infinity for y = " + std::to_string(y));
  }

  const double x = detail::x_of_mean(y / p, p, params, acc);
  if (std::abs(p * moment_sums(x, params, p, acc).phi1 - y) > kRootTol * std::max(1.0, y)) {
    throw Error(ErrorCode::no_convergence, "x_of_y: residual above tolerance at y = " + std::to_string(y));
  }
  return x;
}

double mu_bar(double y, double p, const ModelParams& params, const SeriesAccuracy& acc) {
  return x_of_y(y, p, params, acc) - y;
}

StationaryPoint make_stationary_point(double x, const ThermoPoint& pt, const ModelParams& params,
                                      const SeriesAccuracy& acc) {
  const MomentSums ms = moment_sums(x, params, pt.p, acc);
  StationaryPoint sp;
  sp.x = x;
  sp.y = x - pt.mu;
  sp.e_value = -sp.y * sp.y / (2.0 * pt.p) + ms.phi;
  sp.curvature = -1.0 / pt.p + ms.phi2;
  if (sp.curvature < -kKindTol) {
    sp.kind = PointKind::maximum;
  } else if (sp.curvature > kKindTol) {
    sp.kind = PointKind::minimum;
  } else {
    sp.kind = PointKind::degenerate;
  }
  return sp;
}

std::vector<double> curvature_crossings(double p, double x_from, double x_to, const ModelParams& params,
                                        const SeriesAccuracy& acc) {
  const CurvatureGrid grid = sample_curvature(p, x_from, x_to, params, acc);
  const auto h1 = [&](double x) { return p * moment_sums(x, params, p, acc).phi2 - 1.0; };
  const auto& xs = grid.xs;
  const auto& hs = grid.hs;
  std::vector<double> out;

  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if ((hs[i] >= 1.0) != (hs[i + 1] >= 1.0)) {
      out.push_back(detail::solve_bracketed(h1, xs[i], xs[i + 1], hs[i] - 1.0, hs[i + 1] - 1.0,
                                            "curvature crossing"));
    }
  }

  // Humps (or dips) that cross 1 strictly between two grid points.
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    const bool peak = hs[i] >= hs[i - 1] && hs[i] >= hs[i + 1] && hs[i] < 1.0 && hs[i] > 0.9;
    const bool dip = hs[i] <= hs[i - 1] && hs[i] <= hs[i + 1] && hs[i] >= 1.0 && hs[i] < 1.1;
    if (!peak && !dip) continue;
    const auto signed_h = [&](double x) { return (peak ? 1.0 : -1.0) * (h1(x) + 1.0); };
    const auto [xm, value] = detail::maximize(signed_h, xs[i - 1], xs[i + 1]);
    const double hm = peak ? value : -value;
    if ((hm >= 1.0) == (hs[i] >= 1.0)) continue;
    out.push_back(detail::solve_bracketed(h1, xs[i - 1], xm, hs[i - 1] - 1.0, hm - 1.0, "curvature crossing"));
    out.push_back(detail::solve_bracketed(h1, xm, xs[i + 1], hm - 1.0, hs[i + 1] - 1.0, "curvature crossing"));
  }

  std::sort(out.begin(), out.end());
  return out;
}

std::vector<StationaryPoint> stationary_points(const ThermoPoint& pt, const ModelParams& params,
                                               const SeriesAccuracy& acc) {
  pt.validate();
  params.validate();
  acc.validate();
  const double p = pt.p;
  const double mu = pt.mu;

  if (params.upsilon == 0.0) {
    StationaryPoint sp = make_stationary_point(mu, pt, params, acc);
    sp.boundary = true;
    return {sp};
  }

  const auto g = [&](double x) { return x - p * moment_sums(x, params, p, acc).phi1 - mu; };

  // g < 0 on the left since phi1 >= 0. On the right, mean <= mode + 1 and the
  // mode bound give p*phi1 <= (x + ln upsilon)/a + 3p/2, so g > 0 beyond x_hi.
  const double x_lo = mu - 10.0;
  const double a = params.a;
  double x_hi = std::max(mu + p, (a * (mu + 1.5 * p) + std::log(params.upsilon)) / (a - 1.0)) + 1.0;
  x_hi = std::max(x_hi, x_lo + 1.0);
  double g_hi = g(x_hi);
  for (int k = 0; g_hi <= 0.0; ++k) {
    if (k > 60) throw Error(ErrorCode::no_convergence, "stationary_points: right end never turns positive");
    x_hi += std::max(1.0, x_hi - x_lo);
    g_hi = g(x_hi);
  }

  std::vector<double> breaks{x_lo};
  for (double c : curvature_crossings(p, x_lo, x_hi, params, acc)) breaks.push_back(c);
  breaks.push_back(x_hi);

  std::vector<double> gs(breaks.size());
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    gs[i] = i + 1 == breaks.size() ? g_hi : g(breaks[i]);
  }

  std::vector<double> roots;
  const auto push_root = [&](double x) {
    if (roots.empty() || std::abs(x - roots.back()) > 1e-12 * std::max(1.0, std::abs(x))) roots.push_back(x);
  };
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (gs[i] == 0.0) {
      push_root(breaks[i]);
    } else if ((gs[i] < 0.0) != (gs[i + 1] < 0.0) && gs[i + 1] != 0.0) {
      push_root(detail::solve_bracketed(g, breaks[i], breaks[i + 1], gs[i], gs[i + 1], "stationary_points"));
    }
  }
  if (gs.back() == 0.0) push_root(breaks.back());

  std::vector<StationaryPoint> out;
  out.reserve(roots.size());
  for (double x : roots) out.push_back(make_stationary_point(x, pt, params, acc));
  return out;
}

PrimaryRange primary_range(double p, const ModelParams& params, const SeriesAccuracy& acc) {
  PrimaryRange r;
  r.x_one = detail::x_of_mean(1.0, p, params, acc);
  r.x_floor = std::min(std::log(1e-3 / (p * params.upsilon)), r.x_one - 10.0);
  return r;
}

CurvaturePeak max_curvature(double p, const ModelParams& params, const SeriesAccuracy& acc) {
  params.validate();
  if (params.upsilon == 0.0) return {};
  const PrimaryRange range = primary_range(p, params, acc);
  const CurvatureGrid grid = sample_curvature(p, range.x_floor, range.x_one, params, acc);
  return refine_peak(grid, p, params, acc);
}

std::optional<SpinodalInterval> spinodal(double p, const ModelParams& params, const SeriesAccuracy& acc) {
  params.validate();
  acc.validate();
  if (!(std::isfinite(p) && p > 0.0)) throw Error(ErrorCode::invalid_params, "spinodal needs p > 0");
  if (params.upsilon == 0.0) return std::nullopt;

  const PrimaryRange range = primary_range(p, params, acc);
  const CurvatureGrid grid = sample_curvature(p, range.x_floor, range.x_one, params, acc);
  const CurvaturePeak peak = refine_peak(grid, p, params, acc);
  if (peak.value <= 1.0) return std::nullopt;

  const auto& xs = grid.xs;
  const auto& hs = grid.hs;
  const auto h1 = [&](double x) { return p * moment_sums(x, params, p, acc).phi2 - 1.0; };
  const double hm = peak.value - 1.0;

  // Nearest grid points below 1 on each side of the peak.
  auto up = std::upper_bound(xs.begin(), xs.end(), peak.x);
  long left = static_cast<long>(up - xs.begin()) - 1;
  while (left >= 0 && hs[left] >= 1.0) --left;
  if (left < 0) throw Error(ErrorCode::no_convergence, "spinodal: window does not open inside the scan");
  const bool left_adjacent = left + 1 >= static_cast<long>(xs.size()) || xs[left + 1] > peak.x;
  const double l_hi = left_adjacent ? peak.x : xs[left + 1];
  const double l_fhi = left_adjacent ? hm : hs[left + 1] - 1.0;

  auto low = std::lower_bound(xs.begin(), xs.end(), peak.x);
  std::size_t right = static_cast<std::size_t>(low - xs.begin());
  while (right < xs.size() && hs[right] >= 1.0) ++right;
  if (right >= xs.size()) throw Error(ErrorCode::no_convergence, "spinodal: window does not close below unit occupancy");
  const bool right_adjacent = right == 0 || xs[right - 1] < peak.x;
  const double r_lo = right_adjacent ? peak.x : xs[right - 1];
  const double r_flo = right_adjacent ? hm : hs[right - 1] - 1.0;

  SpinodalInterval s;
  s.x_lo = detail::solve_bracketed(h1, xs[left], l_hi, hs[left] - 1.0, l_fhi, "spinodal (left)");
  s.x_hi = detail::solve_bracketed(h1, r_lo, xs[right], r_flo, hs[right] - 1.0, "spinodal (right)");
  s.y_lo = p * moment_sums(s.x_lo, params, p, acc).phi1;
  s.y_hi = p * moment_sums(s.x_hi, params, p, acc).phi1;
  s.mu_top = s.x_lo - s.y_lo;
  s.mu_bottom = s.x_hi - s.y_hi;

  int transitions = 0;
  for (std::size_t i = 0; i + 1 < hs.size(); ++i) {
    if ((hs[i] >= 1.0) != (hs[i + 1] >= 1.0)) ++transitions;
  }
  s.multi_well = transitions > 2;
  return s;
}

double small_p_bound(double x0, const ModelParams& params) {
  params.validate();
  if (!(std::isfinite(x0) && x0 > 0.0)) {
    throw Error(ErrorCode::invalid_params, "small_p_bound needs x0 > 0");
  }
  if (params.upsilon == 0.0) {
    throw Error(ErrorCode::invalid_params, "small_p_bound needs upsilon > 0");
  }
  return std::exp(-x0 - 2.0 * params.upsilon * std::exp(x0)) / (params.a * params.upsilon);
}

}  // namespace cwphase

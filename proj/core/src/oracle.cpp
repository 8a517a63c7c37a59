#include "cwphase/oracle.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cwphase/error.hpp"
#include "cwphase/series.hpp"
#include "cwphase/stationary.hpp"
#include "cwphase/thermo.hpp"

namespace cwphase {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kMaxCap = 4096;
constexpr double kWindowDepth = 50.0;

template <class Terms>
double log_sum_exp(std::size_t count, Terms&& term) {
  double peak = kNegInf;
  for (std::size_t i = 0; i < count; ++i) peak = std::max(peak, term(i));
  if (peak == kNegInf) return kNegInf;
  long double sum = 0.0L;
  for (std::size_t i = 0; i < count; ++i) {
    const double t = term(i);
    if (t != kNegInf) sum += std::exp(static_cast<long double>(t - peak));
  }
  return peak + static_cast<double>(std::log(sum));
}

void check_cells(int n_cells) {
  if (n_cells < 1) throw Error(ErrorCode::invalid_params, "need at least one cell, got " + std::to_string(n_cells));
}

}  // namespace

double cell_weight(int n, const ThermoPoint& pt, const ModelParams& params) {
  if (n < 0) throw Error(ErrorCode::invalid_params, "occupation must be non-negative");
  return log_weight(n, pt.mu, pt.p, params);
}

double log_xi_truncated(int n_cells, const ThermoPoint& pt, const ModelParams& params, int n_max) {
  check_cells(n_cells);
  pt.validate(/*allow_decoupled=*/true);
  params.validate();
  if (n_max < 0) throw Error(ErrorCode::invalid_params, "n_max must be non-negative");

  std::vector<double> base(static_cast<std::size_t>(n_max) + 1);
  for (int m = 0; m <= n_max; ++m) base[m] = cell_weight(m, pt, params);

  // conv[M] = ln c_k(M), the total weight of k cells holding M particles.
  std::vector<double> conv = base;
  std::vector<double> next;
  for (int k = 2; k <= n_cells; ++k) {
    const int prev_top = (k - 1) * n_max;
    next.assign(static_cast<std::size_t>(k) * n_max + 1, kNegInf);
    for (int total = 0; total <= k * n_max; ++total) {
      const int m_lo = std::max(0, total - prev_top);
      const int m_hi = std::min(total, n_max);
      next[total] = log_sum_exp(static_cast<std::size_t>(m_hi - m_lo + 1), [&](std::size_t i) {
        const int m = m_lo + static_cast<int>(i);
        return conv[total - m] + base[m];
      });
    }
    conv.swap(next);
  }

  const double coupling = pt.p / (2.0 * n_cells);
  return log_sum_exp(conv.size(), [&](std::size_t total) {
    const double t = static_cast<double>(total);
    return conv[total] == kNegInf ? kNegInf : coupling * t * t + conv[total];
  });
}

FiniteNResult exact_log_xi(int n_cells, const ThermoPoint& pt, const ModelParams& params, int n_max) {
  check_cells(n_cells);
  pt.validate(/*allow_decoupled=*/true);
  params.validate();

  int cap = n_max;
  if (cap <= 0) {
    const double poisson = 8.0 * params.upsilon * std::exp(std::min(pt.mu, 6.0));
    cap = std::clamp(static_cast<int>(std::ceil(poisson)), 16, 256);
  }

  FiniteNResult out;
  out.n_cells = n_cells;
  while (true) {
    const double base = log_xi_truncated(n_cells, pt, params, cap);
    const double wider = log_xi_truncated(n_cells, pt, params, cap + 8);
    out.cap_sensitivity = std::abs(wider - base);
    if (out.cap_sensitivity <= 1e-10 * std::max(1.0, std::abs(base))) {
      out.n_max = cap;
      out.log_xi = base;
      break;
    }
    cap *= 2;
    if (cap > kMaxCap) {
      throw Error(ErrorCode::cap_escalation_failed,
                  "occupation cap exceeded " + std::to_string(kMaxCap) + " without convergence");
    }
  }
  out.p_n = params.upsilon == 0.0 ? 0.0 : out.log_xi / (params.upsilon * n_cells);
  return out;
}

double laplace_log_xi(int n_cells, const ThermoPoint& pt, const ModelParams& params, const SeriesAccuracy& acc) {
  check_cells(n_cells);
  pt.validate();
  params.validate();
  const double n = static_cast<double>(n_cells);

  const std::vector<StationaryPoint> points = stationary_points(pt, params, acc);
  double e_star = kNegInf;
  for (const StationaryPoint& sp : points) e_star = std::max(e_star, sp.e_value);

  const auto exponent = [&](double y) { return n * (big_e(y, pt, params, acc) - e_star); };
  const auto integrand = [&](double y) { return std::exp(exponent(y)); };

  std::vector<double> cuts;
  for (const StationaryPoint& sp : points) cuts.push_back(sp.y);
  const double y_first = cuts.front();
  const double y_last = cuts.back();

  double step = 1.0;
  while (exponent(y_first - step) > -kWindowDepth) step *= 2.0;
  cuts.insert(cuts.begin(), y_first - step);
  step = 1.0;
  while (exponent(y_last + step) > -kWindowDepth) step *= 2.0;
  cuts.push_back(y_last + step);

  using Quadrature = boost::math::quadrature::gauss_kronrod<double, 61>;
  long double total = 0.0L;
  double total_error = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    double error = 0.0;
    total += Quadrature::integrate(integrand, cuts[i], cuts[i + 1], 12, 1e-12, &error);
    total_error += error;
  }
  if (!(total > 0.0L) || total_error > 1e-9 * static_cast<double>(total)) {
    throw Error(ErrorCode::quadrature_no_convergence,
                "quadrature error estimate " + std::to_string(total_error) + " too large");
  }

  const double two_pi = boost::math::constants::two_pi<double>();
  return 0.5 * std::log(n / (two_pi * pt.p)) + n * e_star + static_cast<double>(std::log(total));
}

std::vector<ConvergenceRow> convergence_report(const ThermoPoint& pt, const ModelParams& params,
                                               std::span<const int> n_list, const SeriesAccuracy& acc) {
  const double limit = pressure(pt, params, acc);
  std::vector<ConvergenceRow> rows;
  rows.reserve(n_list.size());
  for (const int cells : n_list) {
    const FiniteNResult r = exact_log_xi(cells, pt, params);
    rows.push_back({cells, r.p_n, limit, r.p_n - limit});
  }
  return rows;
}

}  // namespace cwphase

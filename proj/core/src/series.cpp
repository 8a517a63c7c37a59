#include "cwphase/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cwphase/error.hpp"

namespace cwphase {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_inputs(double x, double p, const ModelParams& params, const SeriesAccuracy& acc) {
  params.validate();
  acc.validate();
  if (!(std::isfinite(p) && p >= 0.0)) {
    throw Error(ErrorCode::invalid_params, "series needs p >= 0, got " + std::to_string(p));
  }
  if (!std::isfinite(x)) {
    throw Error(ErrorCode::invalid_params, "series argument x must be finite");
  }
}

// l(n+1) - l(n); strictly decreasing in n.
double forward_difference(long n, double x, double p, const ModelParams& params) {
  const double nd = static_cast<double>(n);
  return std::log(params.upsilon) + x - std::log1p(nd) - 0.5 * params.a * p * (2.0 * nd + 1.0);
}

struct TermRange {
  int first = 0;
  int last = 0;
  int peak = 0;
  double log_peak = 0.0;
};

TermRange term_range(double x, double p, const ModelParams& params, const SeriesAccuracy& acc) {
  TermRange r;
  r.peak = peak_index(x, p, params);
  r.log_peak = log_weight(r.peak, x, p, params);
  const double cutoff = std::log(acc.rel_tol);

  int n = r.peak;
  while (true) {
    const int next = n + 1;
    if (next - r.peak > acc.min_terms && log_weight(next, x, p, params) - r.log_peak < cutoff) break;
    n = next;
    if (n - r.peak > acc.max_terms) {
      throw Error(ErrorCode::cap_exceeded, "series upper tail exceeds max_terms at x = " + std::to_string(x));
    }
  }
  r.last = n;

  n = r.peak;
  while (n > 0) {
    const int prev = n - 1;
    if (r.peak - prev > acc.min_terms && log_weight(prev, x, p, params) - r.log_peak < cutoff) break;
    n = prev;
  }
  r.first = n;

  if (r.last - r.first + 1 > acc.max_terms) {
    throw Error(ErrorCode::cap_exceeded,
                "series needs " + std::to_string(r.last - r.first + 1) + " terms, cap is " +
                    std::to_string(acc.max_terms));
  }
  return r;
}

}  // namespace

double log_weight(int n, double x, double p, const ModelParams& params) {
  if (n == 0) return 0.0;
  if (params.upsilon == 0.0) return kNegInf;
  const double nd = static_cast<double>(n);
  return nd * (std::log(params.upsilon) + x) - std::lgamma(nd + 1.0) - 0.5 * params.a * p * nd * nd;
}

int peak_index(double x, double p, const ModelParams& params) {
  if (params.upsilon == 0.0 || forward_difference(0, x, p, params) <= 0.0) return 0;
  long lo = 0;  // forward_difference(lo) > 0
  long hi = 1;
  while (forward_difference(hi, x, p, params) > 0.0) {
    lo = hi;
    hi *= 2;
    if (hi > std::numeric_limits<int>::max() / 4) {
      throw Error(ErrorCode::cap_exceeded, "series peak index overflows at x = " + std::to_string(x));
    }
  }
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    if (forward_difference(mid, x, p, params) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return static_cast<int>(hi);
}

MomentSums moment_sums(double x, const ModelParams& params, double p, const SeriesAccuracy& acc) {
  check_inputs(x, p, params, acc);
  if (params.upsilon == 0.0) return MomentSums{};

  const TermRange r = term_range(x, p, params, acc);
  const int count = r.last - r.first + 1;

  std::vector<long double> w(static_cast<std::size_t>(count));
  long double s0 = 0.0L;
  long double s1 = 0.0L;
  for (int i = 0; i < count; ++i) {
    const int n = r.first + i;
    w[i] = std::exp(static_cast<long double>(log_weight(n, x, p, params) - r.log_peak));
    s0 += w[i];
    s1 += w[i] * n;
  }
  const long double mean = s1 / s0;

  // Central moments about the weighted mean.
  long double m2 = 0.0L;
  long double m3 = 0.0L;
  for (int i = 0; i < count; ++i) {
    const long double d = static_cast<long double>(r.first + i) - mean;
    m2 += w[i] * d * d;
    m3 += w[i] * d * d * d;
  }

  MomentSums out;
  out.phi = static_cast<double>(r.log_peak + std::log(s0));
  out.phi1 = static_cast<double>(mean);
  out.phi2 = static_cast<double>(m2 / s0);
  out.phi3 = static_cast<double>(m3 / s0);
  out.n_peak = r.peak;
  out.n_terms = count;
  return out;
}

WeightTable normalized_weights(double x, const ModelParams& params, double p, const SeriesAccuracy& acc) {
  check_inputs(x, p, params, acc);
  WeightTable table;
  if (params.upsilon == 0.0) {
    table.probs = {1.0};
    return table;
  }

  const TermRange r = term_range(x, p, params, acc);
  table.probs.resize(static_cast<std::size_t>(r.last) + 1);
  long double total = 0.0L;
  for (int n = 0; n <= r.last; ++n) {
    const long double w = std::exp(static_cast<long double>(log_weight(n, x, p, params) - r.log_peak));
    table.probs[n] = static_cast<double>(w);
    total += w;
  }

  long double tail = 0.0L;
  for (int n = r.last + 1; n <= r.last + 64; ++n) {
    const double rel = log_weight(n, x, p, params) - r.log_peak;
    if (rel < -745.0) break;
    tail += std::exp(static_cast<long double>(rel));
  }

  for (double& q : table.probs) q = static_cast<double>(q / total);
  table.tail_mass = static_cast<double>(tail / (total + tail));
  return table;
}

double big_e(double y, const ThermoPoint& pt, const ModelParams& params, const SeriesAccuracy& acc) {
  pt.validate();
  return -y * y / (2.0 * pt.p) + moment_sums(y + pt.mu, params, pt.p, acc).phi;
}

double e1(double y, const ThermoPoint& pt, const ModelParams& params, const SeriesAccuracy& acc) {
  pt.validate();
  return -y / pt.p + moment_sums(y + pt.mu, params, pt.p, acc).phi1;
}

double e2(double y, const ThermoPoint& pt, const ModelParams& params, const SeriesAccuracy& acc) {
  pt.validate();
  return -1.0 / pt.p + moment_sums(y + pt.mu, params, pt.p, acc).phi2;
}

}  // namespace cwphase

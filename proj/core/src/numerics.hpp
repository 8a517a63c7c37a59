#pragma once

// Thin wrappers over Boost.Math so solver failures surface as cwphase::Error.

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>

#include "cwphase/error.hpp"

namespace cwphase::detail {

inline constexpr std::uintmax_t kMaxIterations = 400;

/// Root of `f` on [lo, hi] given f(lo), f(hi) of opposite sign (or one zero).
template <class F>
double solve_bracketed(F&& f, double lo, double hi, double f_lo, double f_hi, const char* what) {
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo < 0.0) == (f_hi < 0.0)) {
    throw Error(ErrorCode::no_convergence, std::string(what) + ": bracket does not change sign");
  }
  std::uintmax_t iters = kMaxIterations;
  const auto [a, b] = boost::math::tools::toms748_solve(
      f, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(52), iters);
  if (iters >= kMaxIterations) {
    throw Error(ErrorCode::no_convergence, std::string(what) + ": root iteration cap reached");
  }
  // Return whichever end has the smaller residual.
  const double fa = f(a);
  const double fb = f(b);
  return std::abs(fa) <= std::abs(fb) ? a : b;
}

template <class F>
double solve_bracketed(F&& f, double lo, double hi, const char* what) {
  return solve_bracketed(f, lo, hi, f(lo), f(hi), what);
}

/// Brent maximization on [lo, hi]; returns (argmax, max).
template <class F>
std::pair<double, double> maximize(F&& f, double lo, double hi) {
  std::uintmax_t iters = kMaxIterations;
  const auto [x, neg] = boost::math::tools::brent_find_minima(
      [&f](double x) { return -f(x); }, lo, hi, std::numeric_limits<double>::digits / 2, iters);
  return {x, -neg};
}

}  // namespace cwphase::detail

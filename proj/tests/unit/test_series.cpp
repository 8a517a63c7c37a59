#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>

#include "cwphase/cwphase.hpp"
#include "oracles.hpp"

using namespace cwphase;

namespace {

const ModelParams kDefault{1.2, 12.0};

double rel_err(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

}  // namespace

TEST_CASE("small p recovers the Poisson cumulants") {
  const MomentSums ms = moment_sums(0.0, kDefault, 1e-8);
  CHECK(std::abs(ms.phi - 12.0) <= 1e-5);
  CHECK(std::abs(ms.phi1 - 12.0) <= 1e-5);
  CHECK(std::abs(ms.phi2 - 12.0) <= 1e-5);
}

TEST_CASE("empty cell keeps only the n = 0 term") {
  const MomentSums ms = moment_sums(0.7, ModelParams{1.2, 0.0}, 3.0);
  CHECK(ms.phi == 0.0);
  CHECK(ms.phi1 == 0.0);
  CHECK(ms.phi2 == 0.0);
  const ThermoPoint pt{3.0, -0.4};
  CHECK(big_e(1.5, pt, ModelParams{1.2, 0.0}) == doctest::Approx(-1.5 * 1.5 / 6.0));
  CHECK(e1(1.5, pt, ModelParams{1.2, 0.0}) == doctest::Approx(-0.5));
  CHECK(e2(1.5, pt, ModelParams{1.2, 0.0}) == doctest::Approx(-1.0 / 3.0));
}

TEST_CASE("moments at x = 2.5, p = 6 against a 200-term 50-digit sum") {
  const MomentSums ms = moment_sums(2.5, kDefault, 6.0);
  const oracle::BigCumulants ref = oracle::cumulants(2.5, 6.0, 1.2, 12.0);
  CHECK(rel_err(ms.phi, ref.phi) <= 1e-12);
  CHECK(rel_err(ms.phi1, ref.mean) <= 1e-12);
  CHECK(rel_err(ms.phi2, ref.variance) <= 1e-12);
  CHECK(std::abs(ms.phi3 - ref.third) <= 1e-11);
}

TEST_CASE("large a behaves like a two-level system") {
  // sigma = 1/2 where the single-occupancy weight v e^{x - a p / 2} equals 1
  const ModelParams two_level{10.0, 12.0};
  const double x = 10.0 * 4.0 / 2.0 - std::log(12.0);
  const MomentSums ms = moment_sums(x, two_level, 4.0);
  CHECK(std::abs(ms.phi2 - 0.25) <= 1e-3);
  CHECK(std::abs(ms.phi1 - 0.5) <= 1e-3);
  CHECK(rel_err(ms.phi2, oracle::cumulants(x, 4.0, 10.0, 12.0).variance) <= 1e-12);
}

TEST_CASE("phi agrees with extended-precision summation on random points") {
  for (int i = 0; i < 40; ++i) {
    const double x = oracle::uniform(-8.0, 6.0);
    const double p = oracle::uniform(0.05, 10.0);
    const MomentSums ms = moment_sums(x, kDefault, p);
    const oracle::BigCumulants ref = oracle::cumulants(x, p, 1.2, 12.0);
    INFO("x = " << x << ", p = " << p);
    CHECK(rel_err(ms.phi, ref.phi) <= 1e-14);
    CHECK(std::abs(ms.phi1 - ref.mean) <= 1e-12 * std::max(1.0, ref.mean));
    CHECK(std::abs(ms.phi2 - ref.variance) <= 1e-12 * std::max(1.0, ref.variance));
    CHECK(ms.phi2 > 0.0);
  }
}

TEST_CASE("cumulants are x-derivatives with second-order convergence") {
  int resolved = 0;
  for (int i = 0; i < 30; ++i) {
    const double x = oracle::uniform(-4.0, 4.0);
    const double p = oracle::uniform(0.5, 8.0);
    const auto fd_errors = [&](double h) {
      const MomentSums lo = moment_sums(x - h, kDefault, p);
      const MomentSums hi = moment_sums(x + h, kDefault, p);
      const MomentSums mid = moment_sums(x, kDefault, p);
      return std::array<double, 3>{std::abs((hi.phi - lo.phi) / (2 * h) - mid.phi1),
                                   std::abs((hi.phi1 - lo.phi1) / (2 * h) - mid.phi2),
                                   std::abs((hi.phi2 - lo.phi2) / (2 * h) - mid.phi3)};
    };
    const auto coarse = fd_errors(2e-2);
    const auto fine = fd_errors(1e-2);
    for (int k = 0; k < 3; ++k) {
      INFO("x = " << x << ", p = " << p << ", k = " << k + 1);
      CHECK(fine[k] <= 1e-3);
      if (coarse[k] > 1e-8) {
        ++resolved;
        CHECK(coarse[k] / fine[k] == doctest::Approx(4.0).epsilon(0.1));
      }
    }
  }
  CHECK(resolved > 60);
}

TEST_CASE("cumulant limits shrink as p goes to zero") {
  for (const double x : {-2.0, 0.0, 0.5, 1.0}) {
    const double target = 12.0 * std::exp(x);
    double previous[3] = {INFINITY, INFINITY, INFINITY};
    for (const double p : {1e-2, 1e-4, 1e-6}) {
      const MomentSums ms = moment_sums(x, kDefault, p);
      const double errs[3] = {std::abs(ms.phi - target), std::abs(ms.phi1 - target), std::abs(ms.phi2 - target)};
      for (int k = 0; k < 3; ++k) {
        CHECK(errs[k] < previous[k]);
        previous[k] = errs[k];
      }
    }
  }
}

TEST_CASE("the residual small-p deviation is the true one, not truncation") {
  // at p = 1e-6 the exact cumulants still sit O(a p <n^2>) away from v e^x
  for (const double x : {-5.0, -2.0, 0.0, 1.0}) {
    const MomentSums ms = moment_sums(x, kDefault, 1e-6);
    const oracle::BigCumulants ref = oracle::cumulants(x, 1e-6, 1.2, 12.0);
    CHECK(rel_err(ms.phi, ref.phi) <= 1e-14);
    CHECK(rel_err(ms.phi1, ref.mean) <= 1e-13);
    CHECK(rel_err(ms.phi2, ref.variance) <= 1e-12);
  }
  const MomentSums deep = moment_sums(-5.0, kDefault, 1e-6);
  CHECK(std::abs(deep.phi2 - 12.0 * std::exp(-5.0)) <= 1e-5);
}

TEST_CASE("phi and E respect their quadratic upper bounds") {
  for (int i = 0; i < 200; ++i) {
    const double x = oracle::uniform(-20.0, 20.0);
    const double p = oracle::uniform(0.01, 20.0);
    const ModelParams params{oracle::uniform(1.01, 5.0), oracle::uniform(0.1, 30.0)};
    const double phi = moment_sums(x, params, p).phi;
    CHECK(phi <= params.upsilon + x * x / (2.0 * params.a * p) + 1e-12 * std::max(1.0, std::abs(phi)));

    const double y = oracle::uniform(0.0, 30.0);
    const double mu = oracle::uniform(-10.0, 5.0);
    const double bound = -((params.a - 1.0) / (2.0 * params.a * p)) * y * y +
                         (mu / (2.0 * params.a * p)) * (2.0 * y + mu) + params.upsilon;
    const double e = big_e(y, ThermoPoint{p, mu}, params);
    CHECK(e <= bound + 1e-12 * std::max(1.0, std::abs(bound)));
  }
}

TEST_CASE("E at the single maximum of p = 2, mu = -1 matches a 50-digit recomputation") {
  const ThermoPoint pt{2.0, -1.0};
  const auto points = stationary_points(pt, kDefault);
  REQUIRE(points.size() == 1);
  REQUIRE(points[0].kind == PointKind::maximum);
  const double ref = oracle::big_e(points[0].y, 2.0, -1.0, 1.2, 12.0);
  CHECK(std::abs(points[0].e_value - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
}

TEST_CASE("rounded coexistence anchor has two maxima of equal height") {
  const ThermoPoint pt{6.0, -1.890291};
  const auto points = stationary_points(pt, kDefault);
  REQUIRE(points.size() == 3);
  CHECK(std::abs(e1(points[0].y, pt, kDefault)) <= 1e-10);
  // the anchor carries six decimals; dD/dmu = (y_high - y_low)/p bounds the induced gap
  const double resolution = 5e-7 * (points[2].y - points[0].y) / 6.0;
  CHECK(std::abs(points[2].e_value - points[0].e_value) <= resolution);
}

TEST_CASE("e1 is the centered difference of E up to O(h^2)") {
  for (int i = 0; i < 30; ++i) {
    const double y = oracle::uniform(0.1, 12.0);
    const ThermoPoint pt{oracle::uniform(0.5, 8.0), oracle::uniform(-5.0, 1.0)};
    const double exact = e1(y, pt, kDefault);
    const double curv3 = 1.0 + std::abs(moment_sums(y + pt.mu, kDefault, pt.p).phi3);
    for (const double h : {1e-3, 1e-4}) {
      const double fd = (big_e(y + h, pt, kDefault) - big_e(y - h, pt, kDefault)) / (2 * h);
      INFO("y = " << y << ", p = " << pt.p << ", mu = " << pt.mu << ", h = " << h);
      CHECK(std::abs(fd - exact) <= curv3 * h * h + 1e-9);
    }
  }
  CHECK(e1(2.0, ThermoPoint{4.0, 0.3}, ModelParams{1.2, 0.0}) == doctest::Approx(-0.5));
}

TEST_CASE("variance form of E2 equals the double-sum form") {
  CHECK(rel_err(e2(2.0, ThermoPoint{4.0, -2.0}, kDefault), oracle::e2_double_sum(2.0, 4.0, -2.0, 1.2, 12.0)) <= 1e-10);
  for (int i = 0; i < 10; ++i) {
    const double y = oracle::uniform(0.2, 8.0);
    const double p = oracle::uniform(1.0, 8.0);
    const double mu = oracle::uniform(-4.0, 0.0);
    const double got = e2(y, ThermoPoint{p, mu}, kDefault);
    const double want = oracle::e2_double_sum(y, p, mu, 1.2, 12.0);
    INFO("y = " << y << ", p = " << p << ", mu = " << mu);
    CHECK(std::abs(got - want) <= 1e-10 * std::abs(want));
  }
}

TEST_CASE("E2 stays negative along the maximum of a subcritical line") {
  for (int i = 0; i <= 40; ++i) {
    const ThermoPoint pt{2.0, -10.0 + 0.5 * i};
    const double y = classify(pt, kDefault).global_max.y;
    CHECK(e2(y, pt, kDefault) < 0.0);
  }
}

TEST_CASE("series guards") {
  CHECK_THROWS_AS(moment_sums(0.0, ModelParams{1.0, 12.0}, 1.0), Error);
  CHECK_THROWS_AS(moment_sums(0.0, ModelParams{1.2, -1.0}, 1.0), Error);
  try {
    (void)moment_sums(60.0, kDefault, 1e-12);
    FAIL("expected cap_exceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::cap_exceeded);
  }
  CHECK_THROWS_AS(moment_sums(0.0, kDefault, 1.0, SeriesAccuracy{0.0, 16, 100}), Error);
  CHECK_THROWS_AS(moment_sums(0.0, kDefault, 1.0, SeriesAccuracy{1e-15, 200, 100}), Error);
}

TEST_CASE("peak index is the mode of the weights") {
  for (int i = 0; i < 50; ++i) {
    const double x = oracle::uniform(-3.0, 8.0);
    const double p = oracle::uniform(0.01, 6.0);
    const int k = peak_index(x, p, kDefault);
    CHECK(log_weight(k, x, p, kDefault) >= log_weight(k + 1, x, p, kDefault));
    if (k > 0) CHECK(log_weight(k, x, p, kDefault) >= log_weight(k - 1, x, p, kDefault));
  }
}

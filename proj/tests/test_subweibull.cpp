#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "eqtrack/rng.hpp"
#include "eqtrack/subweibull.hpp"

using namespace eqtrack;

namespace {

std::vector<double> abs_normal(std::uint64_t seed, int count) {
  CounterRng rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> out(static_cast<std::size_t>(count));
  for (auto& v : out) v = std::abs(n(rng));
  return out;
}

std::vector<double> exponential(std::uint64_t seed, int count) {
  CounterRng rng(seed);
  std::exponential_distribution<double> e(1.0);
  std::vector<double> out(static_cast<std::size_t>(count));
  for (auto& v : out) v = e(rng);
  return out;
}

BoundInputs example_inputs() {
  BoundInputs in;
  in.alpha = 0.9;
  in.z0_error = 1.0;
  in.Delta = 0.01;
  in.eta = 0.1;
  in.nu = 1.0;
  in.theta = 1.0;
  return in;
}

}  // namespace

TEST_CASE("c_theta") {
  CHECK(std::abs(c_theta(1.0) - 2.0 * std::numbers::e) <= 1e-12);
  CHECK(c_theta(2.0 * std::numbers::e) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(c_theta(0.5) == doctest::Approx(3.2974425414002564).epsilon(1e-14));
  CHECK_THROWS_AS(c_theta(0.0), std::invalid_argument);
  CHECK_THROWS_AS(c_theta(-1.0), std::invalid_argument);
}

TEST_CASE("expectation bound") {
  BoundInputs in = example_inputs();
  CHECK(expectation_bound(in, 10) == doctest::Approx(1.4486784401).epsilon(1e-10));

  BoundInputs quiet = in;
  quiet.nu = 0.0;
  quiet.Delta = 0.0;
  CHECK(expectation_bound(quiet, 7) == doctest::Approx(std::pow(0.9, 7)));
  CHECK(expectation_bound(in, 100000) ==
        doctest::Approx((in.Delta + in.eta * in.nu) / (1.0 - in.alpha)));

  in.alpha = 1.0;
  CHECK_THROWS_AS(expectation_bound(in, 1), std::domain_error);
  in.alpha = 0.5;
  in.nu = -1.0;
  CHECK_THROWS_AS(expectation_bound(in, 1), std::invalid_argument);
}

TEST_CASE("high-probability bound") {
  BoundInputs in = example_inputs();
  in.delta = 2.0 / std::numbers::e;
  const double noise = 2.0 * std::numbers::e * in.eta * in.nu / (1.0 - in.alpha);
  CHECK(high_probability_bound(in, 3) ==
        doctest::Approx(deterministic_bound(in, 3) + noise).epsilon(1e-13));

  BoundInputs quiet = in;
  quiet.nu = 0.0;
  CHECK(high_probability_bound(quiet, 4) == deterministic_bound(quiet, 4));

  BoundInputs ex;
  ex.alpha = 0.9;
  ex.eta = 0.1;
  ex.nu = 1.0;
  ex.theta = 1.0;
  ex.delta = 0.05;
  for (int t : {0, 5, 1000}) {
    CHECK(high_probability_bound(ex, t) == doctest::Approx(20.05482797498767).epsilon(1e-12));
  }

  for (double bad : {0.0, 1.0, -0.1, 1.5}) {
    in.delta = bad;
    CHECK_THROWS_AS(high_probability_bound(in, 0), std::domain_error);
  }
}

TEST_CASE("bounds are monotone") {
  const BoundInputs base = example_inputs();
  for (int t = 0; t < 50; ++t) {
    REQUIRE(expectation_bound(base, t + 1) <= expectation_bound(base, t));
    REQUIRE(high_probability_bound(base, t + 1) <= high_probability_bound(base, t));
  }
  auto bump = [&](double BoundInputs::*field) {
    BoundInputs up = base;
    up.*field *= 1.5;
    CHECK(expectation_bound(up, 5) > expectation_bound(base, 5));
    CHECK(high_probability_bound(up, 5) > high_probability_bound(base, 5));
  };
  bump(&BoundInputs::nu);
  bump(&BoundInputs::Delta);
  bump(&BoundInputs::eta);
}

TEST_CASE("fit on constant samples") {
  const std::vector<double> c(200, 2.5);
  const SubWeibullParams fit = fit_subweibull(c);
  CHECK(fit.theta == 0.5);
  CHECK(fit.nu == doctest::Approx(2.5));
}

TEST_CASE("fit on half-normal samples selects the sub-Gaussian tail") {
  const auto xs = abs_normal(1, 100000);
  const std::vector<double> grid{0.5, 1.0, 2.0};
  const SubWeibullParams fit = fit_subweibull(xs, grid);
  CHECK(fit.theta == 0.5);
  CHECK(fit.nu == doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(0.02));
  CHECK(certifies(xs, fit));
  CHECK(fit_subweibull(xs).theta == 0.5);
}

TEST_CASE("fit on Weibull(1/2) samples selects theta = 2") {
  // E^2 with E ~ Exp(1) is Weibull with shape 1/2
  auto xs = exponential(3, 200000);
  for (auto& v : xs) v *= v;
  const std::vector<double> grid{0.5, 1.0, 2.0};
  const SubWeibullParams fit = fit_subweibull(xs, grid);
  CHECK(fit.theta == 2.0);
  CHECK(certifies(xs, fit));
}

TEST_CASE("fit input validation") {
  CHECK_THROWS_AS(fit_subweibull(std::vector<double>(50, 1.0)), std::invalid_argument);
  std::vector<double> neg(200, 1.0);
  neg[7] = -0.1;
  CHECK_THROWS_AS(fit_subweibull(neg), std::invalid_argument);
  CHECK_THROWS_AS(fit_subweibull(std::vector<double>(200, 1.0), std::vector<double>{}),
                  std::invalid_argument);
}

TEST_CASE("closure rules") {
  auto eq = [](SubWeibullParams a, double theta, double nu) {
    CHECK(a.theta == doctest::Approx(theta));
    CHECK(a.nu == doctest::Approx(nu));
  };
  eq(closure_sum({1, 1}, {1, 2}), 1, 3);
  eq(closure_sum({0.5, 1}, {2, 1}), 2, 2);
  eq(closure_sum({0.5, 4}, {1.5, 0}), 1.5, 4);
  eq(closure_product({1, 1}, {1, 1}), 2, 4);
  CHECK(psi(1.0, 2.0) == doctest::Approx(6.75));
  eq(closure_product({1, 3}, {2, 0}), 3, 0);
  eq(closure_scale({1, 2}, -3.0), 1, 6);
  eq(closure_scale({1.5, 2}, 0.0), 1.5, 0);
  eq(closure_scale({1.5, 2}, 1.0), 1.5, 2);
}

TEST_CASE("closure rules certify sampled combinations") {
  const auto a = abs_normal(11, 50000);
  const auto b = exponential(12, 50000);
  // certify inputs up to p = 20 so products are covered through Hoelder at p <= 10
  const std::vector<double> grid{1.0};
  const SubWeibullParams pa = fit_subweibull(a, grid, 20);
  const SubWeibullParams pb = fit_subweibull(b, grid, 20);
  std::vector<double> sum(a.size()), prod(a.size()), scaled(a.size()), scaled_b(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum[i] = a[i] + b[i];
    prod[i] = a[i] * b[i];
    scaled[i] = std::abs(-3.0 * a[i]);
    scaled_b[i] = 0.25 * b[i];
  }
  CHECK(certifies(sum, closure_sum(pa, pb), 10));
  CHECK(certifies(prod, closure_product(pa, pb), 10));
  CHECK(certifies(scaled, closure_scale(pa, -3.0), 10));

  // default-grid fits on the same draws
  const SubWeibullParams qa = fit_subweibull(a);
  const SubWeibullParams qb = fit_subweibull(b);
  CHECK(certifies(sum, closure_sum(qa, qb), 10));
  CHECK(certifies(scaled_b, closure_scale(qb, 0.25), 10));
}

TEST_CASE("tail bound from moments") {
  CHECK(tail_from_moment({1.0, 1.0}, 1e-9) == 1.0);
  CHECK(tail_from_moment({1.0, 1.0}, 2.0 * std::numbers::e * std::log(2.0)) ==
        doctest::Approx(1.0));
  CHECK(tail_from_moment({1.0, 1.0}, 2.0 * std::numbers::e * std::log(200.0)) ==
        doctest::Approx(0.01));
  CHECK_THROWS_AS(tail_from_moment({1.0, 1.0}, 0.0), std::invalid_argument);
  double prev = 1.0;
  for (double e = 0.5; e < 40.0; e += 0.5) {
    const double p = tail_from_moment({0.5, 1.0}, e);
    REQUIRE(p <= prev);
    REQUIRE(p >= 0.0);
    prev = p;
  }
}

TEST_CASE("empirical tails stay under the fitted tail bound") {
  for (std::uint64_t seed : {21u, 22u}) {
    const auto xs = seed == 21u ? abs_normal(seed, 100000) : exponential(seed, 100000);
    const SubWeibullParams fit = fit_subweibull(xs);
    double hi = 0.0;
    for (double v : xs) hi = std::max(hi, v);
    const double n = static_cast<double>(xs.size());
    for (int i = 1; i <= 20; ++i) {
      const double eps = hi * i / 20.0;
      double count = 0.0;
      for (double v : xs) count += v >= eps ? 1.0 : 0.0;
      const double freq = count / n;
      const double bound = tail_from_moment(fit, eps);
      REQUIRE(freq <= bound + 3.0 * std::sqrt(bound * (1.0 - bound) / n) + 1.0 / n);
    }
  }
}

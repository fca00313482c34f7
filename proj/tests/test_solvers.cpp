#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "eqtrack/parallel.hpp"
#include "eqtrack/solvers.hpp"
#include "eqtrack/subweibull.hpp"
#include "eqtrack/synthetic.hpp"

using namespace eqtrack;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

SolverConfig tight_oracle() {
  SolverConfig c = SolverConfig::oracle_defaults();
  c.tolerance = 1e-13;
  return c;
}

}  // namespace

TEST_CASE("oracle finds the closed-form equilibrium") {
  const auto p = synthetic::scalar_problem(1.0, 0.5, 0.0);
  const Vector z = equilibrium_oracle(*p, tight_oracle());
  CHECK(std::abs(z(0) - 2.0) <= 1e-10);
  CHECK(std::abs(z(1)) <= 1e-10);
}

TEST_CASE("without decision dependence the oracle returns the static saddle point") {
  const auto p = synthetic::scalar_problem(0.0, 0.0, 1.0);
  const Vector z = equilibrium_oracle(*p, tight_oracle());
  CHECK(z.norm() <= 1e-12);

  // translated two-dimensional quadratic; with w = -0.75 the stationarity
  // conditions 2x + 0.5y + w = 0 and -0.5x + y - w = 0 give (0.5, -0.5)
  QuadraticFamily::Terms t;
  t.P = 2.0 * Matrix::Identity(1, 1);
  t.S = Matrix::Identity(1, 1);
  t.R = Matrix::Constant(1, 1, 0.5);
  t.qx = Vector::Zero(1);
  t.qy = Vector::Zero(1);
  t.Ux = Matrix::Identity(1, 1);
  t.Uy = Matrix::Identity(1, 1);
  auto family = std::make_shared<const QuadraticFamily>(t);
  const Vector expected = vec2(0.5, -0.5);
  SaddleProblem q(family, ConstraintSet::box(1, 5.0), ConstraintSet::box(1, 5.0),
                  DistributionalMap::point_mass(Vector::Constant(1, -0.75), Matrix::Zero(1, 2)));
  CHECK((equilibrium_oracle(q, tight_oracle()) - expected).norm() <= 1e-10);
}

TEST_CASE("equilibrium is unique across starts") {
  const auto p = synthetic::scalar_problem(1.0, 0.5, 0.0);
  SolverConfig cfg = SolverConfig::oracle_defaults();
  const Vector a = equilibrium_oracle(*p, cfg, vec2(10.0, 10.0));
  const Vector b = equilibrium_oracle(*p, cfg, vec2(-10.0, -10.0));
  // each run stops within the tolerance of the fixed point
  CHECK((a - b).norm() <= 2.0 * cfg.tolerance);
  CHECK((a - vec2(2.0, 0.0)).norm() <= cfg.tolerance);

  std::mt19937_64 rng(8);
  synthetic::RandomProblemSpec spec;
  spec.ratio = 0.7;
  const auto rp = synthetic::random_problem(rng, spec);
  const SolverConfig tight = tight_oracle();
  const Vector ref = equilibrium_oracle(*rp, tight);
  for (int i = 0; i < 10; ++i) {
    const Vector start = synthetic::random_point(rng, rp->dim(), 10.0);
    REQUIRE((equilibrium_oracle(*rp, tight, start) - ref).norm() <= 1e-10);
  }
}

TEST_CASE("oracle output is a fixed point") {
  std::mt19937_64 rng(12);
  for (double ratio : {0.0, 0.5, 0.9}) {
    synthetic::RandomProblemSpec spec;
    spec.ratio = ratio;
    const auto p = synthetic::random_problem(rng, spec);
    const SolverConfig cfg = SolverConfig::oracle_defaults();
    const Vector z = equilibrium_oracle(*p, cfg);
    CHECK(p->contains(z));
    CHECK(fixed_point_residual(*p, z, oracle_step_size(*p, cfg)) <= cfg.tolerance);
  }
}

TEST_CASE("repeated retraining") {
  const auto p = synthetic::scalar_problem(1.0, 0.5, 0.0);
  const SolverConfig cfg = tight_oracle();
  CHECK((retraining_step(*p, vec2(0.0, 0.0), cfg) - vec2(1.0, 0.0)).norm() <= 1e-10);
  CHECK((retraining_step(*p, vec2(2.0, 0.0), cfg) - vec2(2.0, 0.0)).norm() <= 1e-10);

  // geometric convergence at rate eps L / gamma = 0.5
  Vector z = vec2(-7.0, 3.0);
  const Vector zbar = vec2(2.0, 0.0);
  double prev = (z - zbar).norm();
  for (int k = 0; k < 15; ++k) {
    z = retraining_step(*p, z, cfg);
    const double err = (z - zbar).norm();
    REQUIRE(err <= 0.5 * prev + 1e-10);
    prev = err;
  }
  CHECK(prev < 1e-3);
  CHECK_THROWS_AS(retraining_step(*p, Vector::Zero(3), cfg), DimensionMismatch);
}

TEST_CASE("solver error conditions") {
  const auto bad = synthetic::scalar_problem(1.0, 1.2, 0.0);
  CHECK_THROWS_AS(equilibrium_oracle(*bad, SolverConfig::oracle_defaults()), NotContractive);
  CHECK_THROWS_AS(retraining_step(*bad, vec2(0.0, 0.0), SolverConfig::oracle_defaults()),
                  NotContractive);
  const auto edge = synthetic::scalar_problem(1.0, 1.0, 0.0);
  CHECK_THROWS_AS(equilibrium_oracle(*edge, SolverConfig::oracle_defaults()), NotContractive);

  const auto p = synthetic::scalar_problem(1.0, 0.5, 0.0);
  SolverConfig few = SolverConfig::oracle_defaults();
  few.max_iters = 3;
  try {
    equilibrium_oracle(*p, few);
    FAIL("expected MaxItersExceeded");
  } catch (const MaxItersExceeded& e) {
    CHECK(e.last_iterate().size() == 2);
    CHECK(e.residual() > few.tolerance);
  }

  const auto stream = ProblemStream::constant(p, 5);
  SolverConfig big;
  big.eta = 1.0;
  CHECK_THROWS_AS(online_primal_dual(stream, vec2(0.0, 0.0), big), StepSizeTooLarge);
  CHECK_THROWS_AS(online_stochastic_primal_dual(stream, vec2(0.0, 0.0), big, 0),
                  StepSizeTooLarge);
  big.enforce_cap = false;
  CHECK_NOTHROW(online_primal_dual(stream, vec2(0.0, 0.0), big));
  SolverConfig explicit_eta = SolverConfig::oracle_defaults();
  explicit_eta.eta = 0.5;
  CHECK_THROWS_AS(equilibrium_oracle(*p, explicit_eta), StepSizeTooLarge);

  const auto drifting = synthetic::scalar_drift_stream(0.5, 0.0, 3);
  CHECK_THROWS_AS(stream_constants(ProblemStream::constant(bad, 2)), NotContractive);
  CHECK(stream_constants(drifting).gamma_hat == doctest::Approx(0.5));
}

TEST_CASE("static conceptual run stays under the geometric envelope") {
  std::mt19937_64 rng(31);
  synthetic::RandomProblemSpec spec;
  spec.ratio = 0.5;
  const auto p = synthetic::random_problem(rng, spec);
  const auto stream = ProblemStream::constant(p, 300);
  const auto eq = equilibrium_sequence(stream, tight_oracle());
  CHECK(eq.max_drift == 0.0);
  SolverConfig cfg;
  cfg.eta = 0.5 * stream_constants(stream).eta_cap;
  const Vector z0 = Vector::Constant(p->dim(), spec.half_width);
  const Trajectory traj = online_primal_dual(stream, z0, cfg, eq);
  REQUIRE(traj.horizon() == 300);
  const double e0 = traj.initial_error;
  for (const auto& rec : traj.records) {
    REQUIRE(rec.error <= std::pow(traj.alpha, rec.t) * e0 + 1e-9);
    REQUIRE(p->contains(rec.z));
  }
  for (const auto& row : tracking_errors(traj)) {
    REQUIRE(row.error <= row.bound_conceptual + 1e-9);
  }

  const Trajectory still = online_primal_dual(stream, eq.points[0], cfg, eq);
  for (const auto& rec : still.records) REQUIRE(rec.error <= 1e-10);
}

TEST_CASE("drifting scalar stream respects the asymptotic tracking bound") {
  const auto stream = synthetic::scalar_drift_stream(0.5, 0.0, 1000);
  const auto eq = equilibrium_sequence(stream, tight_oracle());
  // equilibria are mu0(t) / (1 - eps)
  for (int t = 0; t < stream.horizon(); ++t) {
    REQUIRE(std::abs(eq.points[static_cast<std::size_t>(t)](0) -
                     2.0 * std::sin(2.0 * std::numbers::pi * t / 100.0)) <= 1e-10);
  }
  SolverConfig cfg;
  cfg.eta = 0.1;
  const Trajectory traj = online_primal_dual(stream, vec2(5.0, -5.0), cfg, eq);
  const double asymptote = eq.max_drift / (1.0 - traj.alpha);
  double tail_max = 0.0;
  for (int t = 500; t < traj.horizon(); ++t) {
    tail_max = std::max(tail_max, traj.records[static_cast<std::size_t>(t)].error);
  }
  CHECK(tail_max <= asymptote);
  CHECK(tail_max > 0.0);

  // one-step contraction against the current equilibrium
  for (const auto& rec : traj.records) {
    REQUIRE(rec.post_step_error <= traj.alpha * rec.error + 1e-10);
  }

  const auto rows = tracking_errors(traj, 0.3);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].bound_conceptual <= rows[i - 1].bound_conceptual);
    REQUIRE(rows[i].bound_expectation <= rows[i - 1].bound_expectation);
    REQUIRE(rows[i].bound_expectation > rows[i].bound_conceptual);
    REQUIRE(rows[i].bound_conceptual >= asymptote);
  }
  CHECK(rows.back().bound_conceptual == doctest::Approx(asymptote).epsilon(1e-6));
}

TEST_CASE("tracking_errors edge cases") {
  CHECK(tracking_errors(Trajectory{}).empty());
  const auto p = synthetic::scalar_problem(1.0, 0.5, 0.0);
  SolverConfig cfg;
  cfg.eta = 0.1;
  const Trajectory traj =
      online_primal_dual(ProblemStream::constant(p, 4), vec2(0.0, 0.0), cfg, EquilibriumSequence{});
  CHECK(std::isnan(traj.records[0].error));
  CHECK_THROWS_AS(tracking_errors(traj), std::invalid_argument);
}

TEST_CASE("large batches make the gradient error small") {
  const auto p = synthetic::scalar_problem(0.3, 0.5, 1.0);
  const auto stream = ProblemStream::constant(p, 1);
  SolverConfig cfg;
  cfg.eta = 0.1;
  cfg.batch_size = 1'000'000;
  cfg.rng_seed = 17;
  const Trajectory traj = online_stochastic_primal_dual(stream, vec2(1.0, 1.0), cfg, 0);
  // the x-block of g carries -w, the y-block is noiseless
  CHECK(traj.records[0].xi_norm <= 5.0 * 1.0 / std::sqrt(1e6));
  CHECK(traj.records[0].xi_norm > 0.0);
}

TEST_CASE("zero-variance noise reproduces the conceptual run") {
  const auto stream = synthetic::scalar_drift_stream(0.5, 0.0, 200);
  const auto eq = equilibrium_sequence(stream, SolverConfig::oracle_defaults());
  SolverConfig cfg;
  cfg.eta = 0.1;
  const Trajectory a = online_primal_dual(stream, vec2(3.0, 1.0), cfg, eq);
  const Trajectory b = online_stochastic_primal_dual(stream, vec2(3.0, 1.0), cfg, eq, 4);
  for (int t = 0; t < 200; ++t) {
    const auto& ra = a.records[static_cast<std::size_t>(t)];
    const auto& rb = b.records[static_cast<std::size_t>(t)];
    REQUIRE(ra.z == rb.z);
    REQUIRE(rb.xi_norm == 0.0);
  }
  // averaging identical draws only adds rounding
  cfg.batch_size = 3;
  const Trajectory c = online_stochastic_primal_dual(stream, vec2(3.0, 1.0), cfg, eq, 4);
  for (int t = 0; t < 200; ++t) {
    const auto& ra = a.records[static_cast<std::size_t>(t)];
    const auto& rc = c.records[static_cast<std::size_t>(t)];
    REQUIRE((ra.z - rc.z).norm() <= 1e-12);
    REQUIRE(rc.xi_norm <= 1e-14);
  }
}

TEST_CASE("stochastic runs are reproducible per seed") {
  const auto stream = synthetic::scalar_drift_stream(0.5, 1.0, 100);
  const auto eq = equilibrium_sequence(stream, SolverConfig::oracle_defaults());
  SolverConfig cfg;
  cfg.eta = 0.1;
  cfg.rng_seed = 5;
  const Trajectory a = online_stochastic_primal_dual(stream, vec2(0.0, 0.0), cfg, eq, 2);
  const Trajectory b = online_stochastic_primal_dual(stream, vec2(0.0, 0.0), cfg, eq, 2);
  const Trajectory c = online_stochastic_primal_dual(stream, vec2(0.0, 0.0), cfg, eq, 3);
  bool differs = false;
  for (int t = 0; t < 100; ++t) {
    REQUIRE(a.records[static_cast<std::size_t>(t)].z == b.records[static_cast<std::size_t>(t)].z);
    differs = differs || a.records[static_cast<std::size_t>(t)].xi_norm !=
                             c.records[static_cast<std::size_t>(t)].xi_norm;
  }
  CHECK(differs);
}

TEST_CASE("Monte Carlo mean error stays under the expectation bound") {
  const auto p = synthetic::scalar_problem(0.0, 0.5, 1.0);
  const auto stream = ProblemStream::constant(p, 201);
  const auto eq = equilibrium_sequence(stream, tight_oracle());
  SolverConfig cfg;
  cfg.eta = 0.1;
  cfg.rng_seed = 2718;
  const Vector z0 = vec2(5.0, 5.0);
  const MonteCarloResult mc = monte_carlo(stream, z0, cfg, eq, 2000);
  const std::vector<double> xi(mc.xi_norms.data(), mc.xi_norms.data() + mc.xi_norms.size());
  const SubWeibullParams fit = fit_subweibull(xi);
  const Vector mean = column_means(mc.errors);
  BoundInputs in;
  in.alpha = stream_constants(stream).alpha_for(cfg.eta);
  in.eta = cfg.eta;
  in.nu = fit.nu;
  in.theta = fit.theta;
  in.z0_error = (z0 - eq.points[0]).norm();
  for (int t = 0; t < stream.horizon(); ++t) {
    REQUIRE(mean(t) <= expectation_bound(in, t));
  }
}

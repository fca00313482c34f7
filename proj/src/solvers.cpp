#include "eqtrack/solvers.hpp"

#include <cmath>
#include <limits>

#include "eqtrack/subweibull.hpp"

namespace eqtrack {

double StreamConstants::alpha_for(double eta) const {
  return std::sqrt(std::max(0.0, 1.0 - eta * gamma_hat));
}

StreamConstants stream_constants(const ProblemStream& stream) {
  if (stream.horizon() == 0) throw std::invalid_argument("empty stream");
  StreamConstants c;
  c.gamma = std::numeric_limits<double>::infinity();
  c.gamma_hat = std::numeric_limits<double>::infinity();
  c.eta_cap = std::numeric_limits<double>::infinity();
  for (int t = 0; t < stream.horizon(); ++t) {
    const SaddleProblem& p = stream.at(t);
    const RegularityConstants rc = regularity_constants(p);
    c.gamma = std::min(c.gamma, p.gamma());
    c.L = std::max(c.L, p.lipschitz_L());
    c.epsilon = std::max(c.epsilon, p.epsilon());
    c.gamma_hat = std::min(c.gamma_hat, rc.gamma_hat);
    c.L_hat = std::max(c.L_hat, rc.L_hat);
    c.eta_cap = std::min(c.eta_cap, rc.step_size_cap());
  }
  return c;
}

void compute_drift(EquilibriumSequence& seq) {
  seq.drift.clear();
  seq.max_drift = 0.0;
  for (std::size_t t = 0; t + 1 < seq.points.size(); ++t) {
    const double d = (seq.points[t + 1] - seq.points[t]).norm();
    seq.drift.push_back(d);
    seq.max_drift = std::max(seq.max_drift, d);
  }
}

double fixed_point_residual(const SaddleProblem& p, const Vector& z, double eta) {
  return (z - p.project(z - eta * coupled_gradient(p, z))).norm();
}

double oracle_step_size(const SaddleProblem& p, const SolverConfig& cfg) {
  const RegularityConstants rc = regularity_constants(p);
  const double cap = rc.step_size_cap();
  if (cfg.eta <= 0.0) return 0.5 * cap;
  if (cfg.enforce_cap && !(cfg.eta < cap)) throw StepSizeTooLarge(cfg.eta, cap);
  return cfg.eta;
}

namespace {

// Stops once the iterate is certified within `tolerance` of the fixed point:
// for a map with contraction factor rho, ||z_{k+1} - z*|| <= rho / (1 - rho)
// ||z_{k+1} - z_k||. Without a valid factor (rho >= 1) the plain step test is used.
template <typename Map>
Vector fixed_point_iteration(const SaddleProblem& p, Vector z, double eta, double rho,
                             const SolverConfig& cfg, Map&& gradient) {
  if (!(cfg.tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (cfg.max_iters < 1) throw std::invalid_argument("max_iters must be positive");
  const double factor = rho < 1.0 ? std::max(1.0, rho / (1.0 - rho)) : 1.0;
  double residual = std::numeric_limits<double>::infinity();
  for (int it = 0; it < cfg.max_iters; ++it) {
    Vector next = p.project(z - eta * gradient(z));
    residual = (next - z).norm();
    z = std::move(next);
    if (factor * residual <= cfg.tolerance) return z;
  }
  throw MaxItersExceeded(std::move(z), residual, cfg.max_iters);
}

Vector initial_point(const SaddleProblem& p, const std::optional<Vector>& start) {
  if (start) {
    if (start->size() != p.dim()) throw DimensionMismatch("oracle start has wrong length");
    return p.project(*start);
  }
  return p.project(Vector::Zero(p.dim()));
}

void check_online_inputs(const ProblemStream& stream, const Vector& z0, const SolverConfig& cfg,
                         const EquilibriumSequence& eq, const StreamConstants& sc) {
  if (stream.horizon() > 0 && z0.size() != stream.at(0).dim()) {
    throw DimensionMismatch("initial point has wrong length");
  }
  if (!eq.points.empty() && static_cast<int>(eq.points.size()) != stream.horizon()) {
    throw DimensionMismatch("equilibrium sequence length differs from the horizon");
  }
  if (!(cfg.eta > 0.0)) throw std::invalid_argument("eta must be positive");
  if (cfg.enforce_cap && !(cfg.eta < sc.eta_cap)) throw StepSizeTooLarge(cfg.eta, sc.eta_cap);
}

Trajectory make_trajectory(const SolverConfig& cfg, const EquilibriumSequence& eq,
                           const StreamConstants& sc, bool stochastic) {
  Trajectory traj;
  traj.config = cfg;
  traj.stochastic = stochastic;
  traj.drift = eq.drift;
  traj.max_drift = eq.max_drift;
  traj.alpha = sc.alpha_for(cfg.eta);
  traj.eta_cap = sc.eta_cap;
  return traj;
}

template <typename Direction>
Trajectory run_online(const ProblemStream& stream, const Vector& z0, const SolverConfig& cfg,
                      const EquilibriumSequence& eq, bool stochastic, Direction&& direction) {
  const StreamConstants sc = stream_constants(stream);
  check_online_inputs(stream, z0, cfg, eq, sc);
  Trajectory traj = make_trajectory(cfg, eq, sc, stochastic);
  traj.records.reserve(static_cast<std::size_t>(stream.horizon()));

  Vector z = z0;
  for (int t = 0; t < stream.horizon(); ++t) {
    const SaddleProblem& p = stream.at(t);
    TrajectoryRecord rec;
    rec.t = t;
    rec.z = z;
    const Vector exact = coupled_gradient(p, z);
    const Vector step_dir = direction(p, z, exact, t, rec);
    Vector next = p.project(z - cfg.eta * step_dir);
    if (!eq.points.empty()) {
      const Vector& zbar = eq.points[static_cast<std::size_t>(t)];
      rec.equilibrium = zbar;
      rec.error = (z - zbar).norm();
      rec.post_step_error = (next - zbar).norm();
    } else {
      rec.error = std::numeric_limits<double>::quiet_NaN();
      rec.post_step_error = std::numeric_limits<double>::quiet_NaN();
    }
    traj.records.push_back(std::move(rec));
    z = std::move(next);
  }
  if (!traj.records.empty()) traj.initial_error = traj.records.front().error;
  return traj;
}

}  // namespace

Vector equilibrium_oracle(const SaddleProblem& p, const SolverConfig& cfg,
                          const std::optional<Vector>& start) {
  const double eta = oracle_step_size(p, cfg);
  const RegularityConstants rc = regularity_constants(p);
  const double rho = eta < rc.step_size_cap() ? rc.alpha_for(eta) : 1.0;
  return fixed_point_iteration(p, initial_point(p, start), eta, rho, cfg,
                               [&p](const Vector& z) { return coupled_gradient(p, z); });
}

Vector retraining_step(const SaddleProblem& p, const Vector& anchor, const SolverConfig& cfg) {
  if (anchor.size() != p.dim()) throw DimensionMismatch("anchor has wrong length");
  regularity_constants(p);  // eps L < gamma
  // With the distribution frozen, z -> G(z; anchor) is gamma-strongly
  // monotone and L-Lipschitz.
  const double gamma = p.gamma();
  const double L = std::max(p.lipschitz_L(), gamma);
  const double cap = std::min(1.0 / gamma, gamma / (L * L));
  const double eta = cfg.eta > 0.0 && cfg.eta < cap ? cfg.eta : 0.5 * cap;
  const double rho = std::sqrt(1.0 - eta * gamma);
  const Vector w_mean = p.dist_map().mean_shift(anchor);
  return fixed_point_iteration(p, p.project(anchor), eta, rho, cfg, [&](const Vector& z) {
    return p.objective().mean_gradient(z, w_mean);
  });
}

Vector gradient_estimate(const SaddleProblem& p, const Vector& z, int batch_size,
                         CounterRng& rng) {
  if (batch_size < 1) throw std::invalid_argument("batch size must be at least 1");
  const Vector shift = p.dist_map().shift() * z;
  Vector acc = Vector::Zero(p.dim());
  for (int i = 0; i < batch_size; ++i) {
    acc += p.objective().gradient(z, p.dist_map().draw_base(rng) + shift);
  }
  return acc / static_cast<double>(batch_size);
}

Trajectory online_primal_dual(const ProblemStream& stream, const Vector& z0,
                              const SolverConfig& cfg, const EquilibriumSequence& equilibria) {
  return run_online(stream, z0, cfg, equilibria, false,
                    [](const SaddleProblem&, const Vector&, const Vector& exact, int,
                       TrajectoryRecord& rec) {
                      rec.xi_norm = 0.0;
                      return exact;
                    });
}

Trajectory online_stochastic_primal_dual(const ProblemStream& stream, const Vector& z0,
                                         const SolverConfig& cfg,
                                         const EquilibriumSequence& equilibria,
                                         std::uint64_t replication) {
  if (cfg.batch_size < 1) throw std::invalid_argument("batch size must be at least 1");
  return run_online(stream, z0, cfg, equilibria, true,
                    [&](const SaddleProblem& p, const Vector& z, const Vector& exact, int t,
                        TrajectoryRecord& rec) {
                      CounterRng rng(cfg.rng_seed, replication, static_cast<std::uint64_t>(t));
                      Vector h = gradient_estimate(p, z, cfg.batch_size, rng);
                      rec.xi_norm = (h - exact).norm();
                      return h;
                    });
}

std::vector<TrackingRow> tracking_errors(const Trajectory& traj, double nu) {
  std::vector<TrackingRow> rows;
  if (traj.records.empty()) return rows;
  BoundInputs in;
  in.alpha = traj.alpha;
  in.eta = traj.config.eta;
  in.Delta = traj.max_drift;
  in.nu = nu;
  in.z0_error = traj.initial_error;
  rows.reserve(traj.records.size());
  for (const auto& rec : traj.records) {
    if (!rec.equilibrium) {
      throw std::invalid_argument("trajectory has no equilibrium reference at t = " +
                                  std::to_string(rec.t));
    }
    rows.push_back({rec.t, rec.error, deterministic_bound(in, rec.t), expectation_bound(in, rec.t)});
  }
  return rows;
}

}  // namespace eqtrack

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "eqtrack/problem.hpp"

namespace eqtrack {

struct SolverConfig {
  /// Step size. For the equilibrium oracle a non-positive value selects half
  /// of the problem's step-size cap.
  double eta = 0.01;
  int batch_size = 1;
  int max_iters = 1'000'000;
  double tolerance = 1e-10;
  std::uint64_t rng_seed = 0;
  bool enforce_cap = true;

  static SolverConfig oracle_defaults() {
    SolverConfig c;
    c.eta = 0.0;
    return c;
  }
};

class MaxItersExceeded : public std::runtime_error {
 public:
  MaxItersExceeded(Vector last_iterate, double residual, int iterations)
      : std::runtime_error("equilibrium oracle hit max_iters = " + std::to_string(iterations) +
                           " with step residual " + std::to_string(residual)),
        last_(std::move(last_iterate)),
        residual_(residual) {}

  const Vector& last_iterate() const { return last_; }
  double residual() const { return residual_; }

 private:
  Vector last_;
  double residual_;
};

/// Worst-case constants over every slice of a stream.
struct StreamConstants {
  double gamma = 0.0;      // min over t
  double L = 0.0;          // max over t
  double epsilon = 0.0;    // max over t
  double gamma_hat = 0.0;  // min over t of gamma_t - eps_t L_t
  double L_hat = 0.0;      // max over t
  double eta_cap = 0.0;    // min over t of the per-slice cap
  /// max over t of sqrt(1 - eta * gamma_hat_t).
  double alpha_for(double eta) const;
};

/// Throws NotContractive if any slice violates eps L < gamma.
StreamConstants stream_constants(const ProblemStream& stream);

struct EquilibriumSequence {
  std::vector<Vector> points;
  /// drift[t] = ||zbar_{t+1} - zbar_t|| for t < T - 1.
  std::vector<double> drift;
  double max_drift = 0.0;
};

/// Fills drift / max_drift from `points`.
void compute_drift(EquilibriumSequence& seq);

struct TrajectoryRecord {
  int t = 0;
  Vector z;
  std::optional<Vector> equilibrium;
  double error = 0.0;            // ||z_t - zbar_t||
  double post_step_error = 0.0;  // ||z_{t+1} - zbar_t||
  double xi_norm = 0.0;          // ||H_t(z_t) - G_t(z_t)||, zero for exact gradients
};

struct Trajectory {
  std::vector<TrajectoryRecord> records;
  SolverConfig config;
  bool stochastic = false;
  std::vector<double> drift;
  double max_drift = 0.0;
  double alpha = 0.0;
  double eta_cap = 0.0;
  double initial_error = 0.0;

  int horizon() const { return static_cast<int>(records.size()); }
};

/// ||z - P_Z(z - eta G(z; z))||.
double fixed_point_residual(const SaddleProblem& p, const Vector& z, double eta);

/// Fixed point of z -> P_Z(z - eta G(z; z)), which is the equilibrium point.
/// Iterates until the contraction estimate alpha / (1 - alpha) times the last
/// step is at most cfg.tolerance, so the result lies within the tolerance of
/// the equilibrium (and the last step is below it as well).
Vector equilibrium_oracle(const SaddleProblem& p, const SolverConfig& cfg,
                          const std::optional<Vector>& start = std::nullopt);

/// One repeated-retraining step: the saddle point of the problem with the
/// distribution frozen at D(anchor).
Vector retraining_step(const SaddleProblem& p, const Vector& anchor, const SolverConfig& cfg);

/// Step size actually used by the oracle for `cfg` (resolves the automatic choice).
double oracle_step_size(const SaddleProblem& p, const SolverConfig& cfg);

/// Projected step with exact G_t at each time index.
Trajectory online_primal_dual(const ProblemStream& stream, const Vector& z0,
                              const SolverConfig& cfg, const EquilibriumSequence& equilibria);

/// Projected step with the mini-batch estimator H_t. `replication` keys the
/// random stream together with cfg.rng_seed and the time index.
Trajectory online_stochastic_primal_dual(const ProblemStream& stream, const Vector& z0,
                                         const SolverConfig& cfg,
                                         const EquilibriumSequence& equilibria,
                                         std::uint64_t replication = 0);

/// Mini-batch estimate (1/N) sum_i g(z, w_i), w_i ~ D(z).
Vector gradient_estimate(const SaddleProblem& p, const Vector& z, int batch_size,
                         CounterRng& rng);

struct TrackingRow {
  int t = 0;
  double error = 0.0;
  double bound_conceptual = 0.0;
  double bound_expectation = 0.0;
};

/// Joins a trajectory with the tracking bounds; `nu` is the gradient-noise
/// proxy used by the expectation bound (0 for exact gradients).
std::vector<TrackingRow> tracking_errors(const Trajectory& traj, double nu = 0.0);

}  // namespace eqtrack

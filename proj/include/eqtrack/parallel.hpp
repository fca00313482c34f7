#pragma once

// OpenMP kernels for the embarrassingly parallel sweeps (per-slice oracle
// solves, Monte Carlo replications). Each has a serial reference that must
// produce bit-identical output; the tests and the benchmark compare them.

#include <cstdint>

#include "eqtrack/solvers.hpp"

namespace eqtrack {

EquilibriumSequence equilibrium_sequence_serial(const ProblemStream& stream,
                                                const SolverConfig& oracle_cfg);
EquilibriumSequence equilibrium_sequence(const ProblemStream& stream,
                                         const SolverConfig& oracle_cfg);

/// Error and gradient-noise norms, one row per replication, one column per t.
struct MonteCarloResult {
  Matrix errors;
  Matrix xi_norms;
};

MonteCarloResult monte_carlo_serial(const ProblemStream& stream, const Vector& z0,
                                    const SolverConfig& cfg, const EquilibriumSequence& eq,
                                    int replications);
MonteCarloResult monte_carlo(const ProblemStream& stream, const Vector& z0,
                             const SolverConfig& cfg, const EquilibriumSequence& eq,
                             int replications);

/// Per-column mean.
Vector column_means(const Matrix& samples);
/// Per-column empirical q-quantile: the ceil(q R)-th order statistic.
Vector column_quantiles(const Matrix& samples, double q);

/// Runs with the equilibrium sequence computed by the oracle (default settings).
Trajectory online_primal_dual(const ProblemStream& stream, const Vector& z0,
                              const SolverConfig& cfg);
Trajectory online_stochastic_primal_dual(const ProblemStream& stream, const Vector& z0,
                                         const SolverConfig& cfg, std::uint64_t replication);

int max_threads();
/// Worker count for subsequent parallel regions; n < 1 keeps the runtime default.
void set_max_threads(int n);

}  // namespace eqtrack

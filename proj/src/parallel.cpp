#include "eqtrack/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <vector>

#include <omp.h>

namespace eqtrack {

namespace {

// Exceptions cannot cross an OpenMP region; keep the one from the lowest
// index so the rethrown error does not depend on the schedule.
class FirstError {
 public:
  void capture(long index) {
#pragma omp critical(eqtrack_first_error)
    {
      if (!error_ || index < index_) {
        error_ = std::current_exception();
        index_ = index;
      }
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::exception_ptr error_;
  long index_ = 0;
};

void store_row(MonteCarloResult& out, int r, const Trajectory& traj) {
  for (const auto& rec : traj.records) {
    out.errors(r, rec.t) = rec.error;
    out.xi_norms(r, rec.t) = rec.xi_norm;
  }
}

MonteCarloResult allocate(const ProblemStream& stream, int replications) {
  if (replications < 1) throw std::invalid_argument("replications must be at least 1");
  return {Matrix(replications, stream.horizon()), Matrix(replications, stream.horizon())};
}

}  // namespace

int max_threads() { return omp_get_max_threads(); }

void set_max_threads(int n) {
  if (n >= 1) omp_set_num_threads(n);
}

EquilibriumSequence equilibrium_sequence_serial(const ProblemStream& stream,
                                                const SolverConfig& oracle_cfg) {
  EquilibriumSequence seq;
  seq.points.reserve(static_cast<std::size_t>(stream.horizon()));
  for (int t = 0; t < stream.horizon(); ++t) {
    seq.points.push_back(equilibrium_oracle(stream.at(t), oracle_cfg));
  }
  compute_drift(seq);
  return seq;
}

EquilibriumSequence equilibrium_sequence(const ProblemStream& stream,
                                         const SolverConfig& oracle_cfg) {
  const int horizon = stream.horizon();
  EquilibriumSequence seq;
  seq.points.resize(static_cast<std::size_t>(horizon));
  FirstError err;
#pragma omp parallel for schedule(dynamic, 16)
  for (int t = 0; t < horizon; ++t) {
    try {
      seq.points[static_cast<std::size_t>(t)] = equilibrium_oracle(stream.at(t), oracle_cfg);
    } catch (...) {
      err.capture(t);
    }
  }
  err.rethrow();
  compute_drift(seq);
  return seq;
}

MonteCarloResult monte_carlo_serial(const ProblemStream& stream, const Vector& z0,
                                    const SolverConfig& cfg, const EquilibriumSequence& eq,
                                    int replications) {
  MonteCarloResult out = allocate(stream, replications);
  for (int r = 0; r < replications; ++r) {
    store_row(out, r,
              online_stochastic_primal_dual(stream, z0, cfg, eq, static_cast<std::uint64_t>(r)));
  }
  return out;
}

MonteCarloResult monte_carlo(const ProblemStream& stream, const Vector& z0,
                             const SolverConfig& cfg, const EquilibriumSequence& eq,
                             int replications) {
  MonteCarloResult out = allocate(stream, replications);
  FirstError err;
#pragma omp parallel for schedule(static)
  for (int r = 0; r < replications; ++r) {
    try {
      store_row(out, r,
                online_stochastic_primal_dual(stream, z0, cfg, eq, static_cast<std::uint64_t>(r)));
    } catch (...) {
      err.capture(r);
    }
  }
  err.rethrow();
  return out;
}

Vector column_means(const Matrix& samples) {
  if (samples.rows() == 0) throw std::invalid_argument("no samples");
  // Averaging deviations from the first row keeps constant columns exact, so
  // a noiseless mean never exceeds a bound it equals by rounding alone.
  const Eigen::RowVectorXd pivot = samples.row(0);
  return (pivot + (samples.rowwise() - pivot).colwise().mean()).transpose();
}

Vector column_quantiles(const Matrix& samples, double q) {
  if (samples.rows() == 0) throw std::invalid_argument("no samples");
  if (!(q > 0.0) || !(q <= 1.0)) throw std::invalid_argument("quantile level must be in (0, 1]");
  const Eigen::Index rows = samples.rows();
  const auto rank = static_cast<Eigen::Index>(std::ceil(q * static_cast<double>(rows)));
  const Eigen::Index k = std::clamp<Eigen::Index>(rank, 1, rows) - 1;
  Vector out(samples.cols());
#pragma omp parallel for schedule(static)
  for (Eigen::Index c = 0; c < samples.cols(); ++c) {
    std::vector<double> col(samples.col(c).data(), samples.col(c).data() + rows);
    std::nth_element(col.begin(), col.begin() + k, col.end());
    out(c) = col[static_cast<std::size_t>(k)];
  }
  return out;
}

Trajectory online_primal_dual(const ProblemStream& stream, const Vector& z0,
                              const SolverConfig& cfg) {
  return online_primal_dual(stream, z0, cfg,
                            equilibrium_sequence(stream, SolverConfig::oracle_defaults()));
}

Trajectory online_stochastic_primal_dual(const ProblemStream& stream, const Vector& z0,
                                         const SolverConfig& cfg, std::uint64_t replication) {
  return online_stochastic_primal_dual(
      stream, z0, cfg, equilibrium_sequence(stream, SolverConfig::oracle_defaults()), replication);
}

}  // namespace eqtrack

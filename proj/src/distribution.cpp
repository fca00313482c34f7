#include "eqtrack/distribution.hpp"

#include <random>

#include <Eigen/Eigenvalues>

#include "eqtrack/io.hpp"
#include "eqtrack/objective.hpp"

namespace eqtrack {

DistributionalMap::DistributionalMap(std::variant<GaussianBase, EmpiricalBase> base, Matrix shift)
    : base_(std::move(base)), shift_(std::move(shift)) {
  if (const auto* g = std::get_if<GaussianBase>(&base_)) {
    const Eigen::Index k = g->mean.size();
    if (g->covariance.rows() != k || g->covariance.cols() != k) {
      throw DimensionMismatch("covariance must be k x k");
    }
    if ((g->covariance - g->covariance.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
      throw std::invalid_argument("covariance must be symmetric");
    }
    // Eigendecomposition tolerates singular (including zero) covariances.
    Eigen::SelfAdjointEigenSolver<Matrix> es(g->covariance);
    const Vector evals = es.eigenvalues();
    if (evals.minCoeff() < -1e-12 * std::max(1.0, evals.cwiseAbs().maxCoeff())) {
      throw std::invalid_argument("covariance must be positive semidefinite");
    }
    factor_ = es.eigenvectors() * evals.cwiseMax(0.0).cwiseSqrt().asDiagonal();
    base_mean_ = g->mean;
  } else {
    const auto& e = std::get<EmpiricalBase>(base_);
    if (e.samples.rows() == 0) {
      throw std::invalid_argument("empirical base has no stored samples");
    }
    base_mean_ = e.samples.colwise().mean().transpose();
  }
  if (shift_.rows() != base_mean_.size()) {
    throw DimensionMismatch("shift matrix rows must equal the data dimension k");
  }
  if (!base_mean_.allFinite() || !shift_.allFinite()) {
    throw std::invalid_argument("distributional map has non-finite entries");
  }
  epsilon_ = spectral_norm(shift_);
}

DistributionalMap DistributionalMap::gaussian(Vector mean, Matrix covariance, Matrix shift) {
  return DistributionalMap(GaussianBase{std::move(mean), std::move(covariance)}, std::move(shift));
}

DistributionalMap DistributionalMap::point_mass(Vector location, Matrix shift) {
  const Eigen::Index k = location.size();
  return gaussian(std::move(location), Matrix::Zero(k, k), std::move(shift));
}

DistributionalMap DistributionalMap::empirical(Matrix samples, Matrix shift) {
  return DistributionalMap(EmpiricalBase{std::move(samples)}, std::move(shift));
}

Vector DistributionalMap::mean_shift(const Vector& z) const {
  if (z.size() != decision_dim()) {
    throw DimensionMismatch("decision has length " + std::to_string(z.size()) + ", map expects " +
                            std::to_string(decision_dim()));
  }
  return base_mean_ + shift_ * z;
}

Vector DistributionalMap::draw_base(CounterRng& rng) const {
  if (const auto* e = std::get_if<EmpiricalBase>(&base_)) {
    std::uniform_int_distribution<Eigen::Index> pick(0, e->samples.rows() - 1);
    return e->samples.row(pick(rng)).transpose();
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector u(base_mean_.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = normal(rng);
  return base_mean_ + factor_ * u;
}

Matrix DistributionalMap::sample(const Vector& z, int count, CounterRng& rng) const {
  if (count < 1) throw std::invalid_argument("sample count must be at least 1");
  if (z.size() != decision_dim()) throw DimensionMismatch("decision dimension");
  const Vector shift = shift_ * z;
  Matrix out(k(), count);
  for (int i = 0; i < count; ++i) out.col(i) = draw_base(rng) + shift;
  return out;
}

Matrix DistributionalMap::sample(const DecisionPoint& z, int count, std::uint64_t seed) const {
  CounterRng rng(seed);
  return sample(z.stacked(), count, rng);
}

Matrix load_observations_csv(const std::string& path) {
  const CsvTable table = read_csv(path);
  std::size_t first = 0;
  if (!table.rows.empty() && !is_number(table.rows.front().front())) first = 1;
  if (table.rows.size() <= first) {
    throw std::runtime_error(path + ": no observations");
  }
  const std::size_t cols = table.rows[first].size();
  Matrix out(static_cast<Eigen::Index>(table.rows.size() - first), static_cast<Eigen::Index>(cols));
  for (std::size_t r = first; r < table.rows.size(); ++r) {
    if (table.rows[r].size() != cols) {
      throw std::runtime_error(path + ": row " + std::to_string(r + 1) + " has " +
                               std::to_string(table.rows[r].size()) + " columns, expected " +
                               std::to_string(cols));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      out(static_cast<Eigen::Index>(r - first), static_cast<Eigen::Index>(c)) =
          parse_number(table.rows[r][c], path + ":" + std::to_string(r + 1));
    }
  }
  return out;
}

}  // namespace eqtrack

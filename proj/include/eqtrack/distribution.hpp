#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "eqtrack/rng.hpp"
#include "eqtrack/types.hpp"

namespace eqtrack {

struct GaussianBase {
  Vector mean;
  Matrix covariance;
};

/// Uniform resampling (with replacement) from stored observations, one per row.
struct EmpiricalBase {
  Matrix samples;
};

/// Location family D(z) = law(w0 + M z), w0 drawn from a fixed base.
///
/// The Wasserstein-1 Lipschitz constant of z -> D(z) is exactly ||M||_2: the
/// coupling that shares w0 moves every sample by M (z - z').
class DistributionalMap {
 public:
  static DistributionalMap gaussian(Vector mean, Matrix covariance, Matrix shift);
  static DistributionalMap point_mass(Vector location, Matrix shift);
  static DistributionalMap empirical(Matrix samples, Matrix shift);

  Eigen::Index k() const { return shift_.rows(); }
  Eigen::Index decision_dim() const { return shift_.cols(); }

  const Matrix& shift() const { return shift_; }
  const Vector& base_mean() const { return base_mean_; }
  const std::variant<GaussianBase, EmpiricalBase>& base() const { return base_; }
  double epsilon() const { return epsilon_; }

  Vector mean_shift(const Vector& z) const;
  Vector mean_shift(const DecisionPoint& z) const { return mean_shift(z.stacked()); }

  /// One base draw w0 (without the decision-dependent shift).
  Vector draw_base(CounterRng& rng) const;

  /// `count` i.i.d. draws of w0 + M z, one per column (k x count).
  Matrix sample(const Vector& z, int count, CounterRng& rng) const;
  Matrix sample(const DecisionPoint& z, int count, std::uint64_t seed) const;

 private:
  DistributionalMap(std::variant<GaussianBase, EmpiricalBase> base, Matrix shift);

  std::variant<GaussianBase, EmpiricalBase> base_;
  Matrix shift_;
  Vector base_mean_;
  Matrix factor_;  // covariance square root for Gaussian bases
  double epsilon_ = 0.0;
};

/// Loads observations from CSV (rows = observations, columns = coordinates).
/// A non-numeric first row is treated as a header.
Matrix load_observations_csv(const std::string& path);

}  // namespace eqtrack

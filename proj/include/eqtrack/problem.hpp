#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "eqtrack/constraint_set.hpp"
#include "eqtrack/distribution.hpp"
#include "eqtrack/objective.hpp"

namespace eqtrack {

/// Constants that drive the tracking analysis.
struct RegularityConstants {
  double gamma_hat = 0.0;  // gamma - eps L, strong monotonicity of G(z; z)
  double L_hat = 0.0;      // (1 + eps) L, Lipschitz constant of G(z; z)
  double epsilon = 0.0;
  /// Contraction factor sqrt(1 - eta * gamma_hat) of one projected step.
  double alpha_for(double eta) const;
  /// Sufficient step-size condition: eta < min(1/gamma_hat, gamma_hat/L_hat^2).
  double step_size_cap() const;
};

/// One time slice of the problem family: objective, constraint sets,
/// distributional map and the regularity moduli (gamma, L).
class SaddleProblem {
 public:
  /// Built-in quadratic family: gamma and L are computed from its matrices.
  /// Overrides are accepted only when they remain valid moduli
  /// (gamma <= computed gamma, L >= computed L).
  SaddleProblem(std::shared_ptr<const QuadraticFamily> objective, ConstraintSet constraint_x,
                ConstraintSet constraint_y, DistributionalMap dist_map,
                std::optional<double> gamma_override = std::nullopt,
                std::optional<double> L_override = std::nullopt);

  /// User-supplied family; the moduli cannot be inferred and must be given.
  SaddleProblem(std::shared_ptr<const ObjectiveFamily> objective, ConstraintSet constraint_x,
                ConstraintSet constraint_y, DistributionalMap dist_map, double gamma, double L);

  Eigen::Index n() const { return objective_->n(); }
  Eigen::Index m() const { return objective_->m(); }
  Eigen::Index dim() const { return n() + m(); }

  const ObjectiveFamily& objective() const { return *objective_; }
  std::shared_ptr<const ObjectiveFamily> objective_ptr() const { return objective_; }
  /// Non-null only for the built-in quadratic family.
  const QuadraticFamily* quadratic() const { return quadratic_.get(); }
  const ConstraintSet& constraint_x() const { return cx_; }
  const ConstraintSet& constraint_y() const { return cy_; }
  const DistributionalMap& dist_map() const { return dist_; }
  double gamma() const { return gamma_; }
  double lipschitz_L() const { return L_; }
  double epsilon() const { return dist_.epsilon(); }

  /// Euclidean projection onto Z = X x Y of a stacked vector.
  Vector project(const Vector& z) const;
  bool contains(const Vector& z, double slack = 1e-12) const;

 private:
  void validate() const;

  std::shared_ptr<const ObjectiveFamily> objective_;
  std::shared_ptr<const QuadraticFamily> quadratic_;
  ConstraintSet cx_;
  ConstraintSet cy_;
  DistributionalMap dist_;
  double gamma_;
  double L_;
};

/// Sequence t -> SaddleProblem over a finite horizon; all slices share n, m.
class ProblemStream {
 public:
  ProblemStream() = default;
  explicit ProblemStream(std::vector<std::shared_ptr<const SaddleProblem>> slices);
  /// The same problem repeated `horizon` times (zero drift).
  static ProblemStream constant(std::shared_ptr<const SaddleProblem> p, int horizon);

  int horizon() const { return static_cast<int>(slices_.size()); }
  const SaddleProblem& at(int t) const { return *slices_.at(static_cast<std::size_t>(t)); }
  std::shared_ptr<const SaddleProblem> ptr(int t) const {
    return slices_.at(static_cast<std::size_t>(t));
  }

 private:
  std::vector<std::shared_ptr<const SaddleProblem>> slices_;
};

Vector project(const ConstraintSet& set, const Vector& v);

/// g(z, w) = (grad_x f, -grad_y f).
Vector stochastic_gradient(const SaddleProblem& p, const Vector& z, const Vector& w);
Vector stochastic_gradient(const SaddleProblem& p, const DecisionPoint& z, const Vector& w);

/// G(z; z') = E_{w ~ D(z')} g(z, w), closed form through the map's mean.
Vector decoupled_gradient(const SaddleProblem& p, const Vector& z, const Vector& z_prime);
Vector decoupled_gradient(const SaddleProblem& p, const DecisionPoint& z,
                          const DecisionPoint& z_prime);

/// Coupled map G(z) = G(z; z) used by all solvers.
inline Vector coupled_gradient(const SaddleProblem& p, const Vector& z) {
  return decoupled_gradient(p, z, z);
}

/// Throws NotContractive when eps L >= gamma.
RegularityConstants regularity_constants(const SaddleProblem& p);
RegularityConstants regularity_constants(double gamma, double L, double epsilon);

}  // namespace eqtrack

#include "eqtrack/problem.hpp"

#include <cmath>

namespace eqtrack {

double RegularityConstants::alpha_for(double eta) const {
  return std::sqrt(std::max(0.0, 1.0 - eta * gamma_hat));
}

double RegularityConstants::step_size_cap() const {
  const double by_modulus = 1.0 / gamma_hat;
  if (L_hat == 0.0) return by_modulus;
  return std::min(by_modulus, gamma_hat / (L_hat * L_hat));
}

RegularityConstants regularity_constants(double gamma, double L, double epsilon) {
  const double eps_L = epsilon * L;
  // eps L = gamma exactly is rejected too: uniqueness needs the strict inequality.
  if (!(eps_L < gamma)) throw NotContractive(gamma, eps_L);
  return {gamma - eps_L, (1.0 + epsilon) * L, epsilon};
}

RegularityConstants regularity_constants(const SaddleProblem& p) {
  return regularity_constants(p.gamma(), p.lipschitz_L(), p.epsilon());
}

SaddleProblem::SaddleProblem(std::shared_ptr<const QuadraticFamily> objective,
                             ConstraintSet constraint_x, ConstraintSet constraint_y,
                             DistributionalMap dist_map, std::optional<double> gamma_override,
                             std::optional<double> L_override)
    : objective_(objective),
      quadratic_(std::move(objective)),
      cx_(std::move(constraint_x)),
      cy_(std::move(constraint_y)),
      dist_(std::move(dist_map)),
      gamma_(quadratic_ ? quadratic_->strong_convexity() : 0.0),
      L_(quadratic_ ? quadratic_->smoothness() : 0.0) {
  if (!quadratic_) throw std::invalid_argument("objective must not be null");
  const double rel = 1e-12;
  if (gamma_override) {
    if (!(*gamma_override > 0.0) || *gamma_override > gamma_ * (1.0 + rel)) {
      throw std::invalid_argument("gamma override " + std::to_string(*gamma_override) +
                                  " is not a valid modulus (computed " + std::to_string(gamma_) +
                                  ")");
    }
    gamma_ = *gamma_override;
  }
  if (L_override) {
    if (*L_override < L_ * (1.0 - rel)) {
      throw std::invalid_argument("L override " + std::to_string(*L_override) +
                                  " is below the computed constant " + std::to_string(L_));
    }
    L_ = *L_override;
  }
  validate();
}

SaddleProblem::SaddleProblem(std::shared_ptr<const ObjectiveFamily> objective,
                             ConstraintSet constraint_x, ConstraintSet constraint_y,
                             DistributionalMap dist_map, double gamma, double L)
    : objective_(std::move(objective)),
      cx_(std::move(constraint_x)),
      cy_(std::move(constraint_y)),
      dist_(std::move(dist_map)),
      gamma_(gamma),
      L_(L) {
  if (!objective_) throw std::invalid_argument("objective must not be null");
  if (!(gamma_ > 0.0) || !(L_ >= 0.0)) {
    throw std::invalid_argument("require gamma > 0 and L >= 0");
  }
  validate();
}

void SaddleProblem::validate() const {
  if (cx_.dimension() != objective_->n() || cy_.dimension() != objective_->m()) {
    throw DimensionMismatch("constraint set dimensions do not match the objective");
  }
  if (dist_.k() != objective_->k()) {
    throw DimensionMismatch("distributional map data dimension " + std::to_string(dist_.k()) +
                            " does not match objective k = " + std::to_string(objective_->k()));
  }
  if (dist_.decision_dim() != dim()) {
    throw DimensionMismatch("distributional map expects decisions of length " +
                            std::to_string(dist_.decision_dim()));
  }
}

Vector SaddleProblem::project(const Vector& z) const {
  if (z.size() != dim()) throw DimensionMismatch("stacked point has wrong length");
  Vector out(dim());
  out.head(n()) = cx_.project(z.head(n()));
  out.tail(m()) = cy_.project(z.tail(m()));
  return out;
}

bool SaddleProblem::contains(const Vector& z, double slack) const {
  return z.size() == dim() && cx_.contains(z.head(n()), slack) &&
         cy_.contains(z.tail(m()), slack);
}

ProblemStream::ProblemStream(std::vector<std::shared_ptr<const SaddleProblem>> slices)
    : slices_(std::move(slices)) {
  for (const auto& s : slices_) {
    if (!s) throw std::invalid_argument("null problem in stream");
    if (s->n() != slices_.front()->n() || s->m() != slices_.front()->m()) {
      throw DimensionMismatch("stream slices must share dimensions");
    }
  }
}

ProblemStream ProblemStream::constant(std::shared_ptr<const SaddleProblem> p, int horizon) {
  if (horizon < 0) throw std::invalid_argument("horizon must be non-negative");
  return ProblemStream(
      std::vector<std::shared_ptr<const SaddleProblem>>(static_cast<std::size_t>(horizon), p));
}

Vector project(const ConstraintSet& set, const Vector& v) { return set.project(v); }

Vector stochastic_gradient(const SaddleProblem& p, const Vector& z, const Vector& w) {
  return p.objective().gradient(z, w);
}

Vector stochastic_gradient(const SaddleProblem& p, const DecisionPoint& z, const Vector& w) {
  if (z.n() != p.n() || z.m() != p.m()) throw DimensionMismatch("decision point dimensions");
  return stochastic_gradient(p, z.stacked(), w);
}

Vector decoupled_gradient(const SaddleProblem& p, const Vector& z, const Vector& z_prime) {
  if (z.size() != p.dim() || z_prime.size() != p.dim()) {
    throw DimensionMismatch("decoupled gradient arguments must have length n + m");
  }
  return p.objective().mean_gradient(z, p.dist_map().mean_shift(z_prime));
}

Vector decoupled_gradient(const SaddleProblem& p, const DecisionPoint& z,
                          const DecisionPoint& z_prime) {
  return decoupled_gradient(p, z.stacked(), z_prime.stacked());
}

}  // namespace eqtrack

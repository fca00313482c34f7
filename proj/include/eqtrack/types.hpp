#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace eqtrack {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when eps * L >= gamma; the equilibrium map is then not a contraction.
class NotContractive : public std::domain_error {
 public:
  NotContractive(double gamma, double eps_L)
      : std::domain_error("not contractive: eps*L = " + std::to_string(eps_L) +
                          " >= gamma = " + std::to_string(gamma)),
        gamma_(gamma),
        eps_L_(eps_L) {}

  double gamma() const { return gamma_; }
  double eps_L() const { return eps_L_; }

 private:
  double gamma_;
  double eps_L_;
};

class StepSizeTooLarge : public std::domain_error {
 public:
  StepSizeTooLarge(double eta, double cap)
      : std::domain_error("step size " + std::to_string(eta) + " violates cap " +
                          std::to_string(cap)),
        eta_(eta),
        cap_(cap) {}

  double eta() const { return eta_; }
  double cap() const { return cap_; }

 private:
  double eta_;
  double cap_;
};

/// Stacked primal-dual point z = (x, y). Dimensions are fixed at construction.
class DecisionPoint {
 public:
  DecisionPoint() = default;
  DecisionPoint(Vector x, Vector y) : x_(std::move(x)), y_(std::move(y)) {}

  static DecisionPoint zeros(Eigen::Index n, Eigen::Index m) {
    return {Vector::Zero(n), Vector::Zero(m)};
  }

  static DecisionPoint from_stacked(const Vector& z, Eigen::Index n) {
    if (n < 0 || n > z.size()) {
      throw DimensionMismatch("primal dimension exceeds stacked length");
    }
    return {z.head(n), z.tail(z.size() - n)};
  }

  const Vector& x() const { return x_; }
  const Vector& y() const { return y_; }
  Eigen::Index n() const { return x_.size(); }
  Eigen::Index m() const { return y_.size(); }
  Eigen::Index size() const { return x_.size() + y_.size(); }

  Vector stacked() const {
    Vector z(size());
    z << x_, y_;
    return z;
  }

  double distance(const DecisionPoint& other) const {
    if (other.n() != n() || other.m() != m()) {
      throw DimensionMismatch("decision points have different dimensions");
    }
    return std::sqrt((x_ - other.x_).squaredNorm() + (y_ - other.y_).squaredNorm());
  }

 private:
  Vector x_;
  Vector y_;
};

}  // namespace eqtrack

#pragma once

#include <memory>

#include "eqtrack/types.hpp"

namespace eqtrack {

/// Stochastic objective f(x, y, w). Implementations return the stacked map
/// g(z, w) = (grad_x f, -grad_y f) so that descent on g is primal descent and
/// dual ascent at once.
class ObjectiveFamily {
 public:
  virtual ~ObjectiveFamily() = default;

  virtual Eigen::Index n() const = 0;
  virtual Eigen::Index m() const = 0;
  /// Dimension of the random data w.
  virtual Eigen::Index k() const = 0;

  virtual double value(const Vector& z, const Vector& w) const = 0;
  virtual Vector gradient(const Vector& z, const Vector& w) const = 0;

  /// E[g(z, w)] when w has mean `w_mean`. Exact only for families affine in
  /// w; the default evaluates g at the mean.
  virtual Vector mean_gradient(const Vector& z, const Vector& w_mean) const {
    return gradient(z, w_mean);
  }
  virtual bool affine_in_w() const { return false; }
};

/// f(x, y, w) = 1/2 x'Px + x'Ry - 1/2 y'Sy + (qx + Ux w)'x + (qy + Uy w)'y
///
/// The stacked gradient is g(z, w) = K z + k0 + U w with
///   K = [P R; -R' S],  k0 = (qx, -qy),  U = [Ux; -Uy].
class QuadraticFamily final : public ObjectiveFamily {
 public:
  struct Terms {
    Matrix P, R, S;
    Vector qx, qy;
    Matrix Ux, Uy;
  };

  /// Validates shapes and symmetry of P and S; throws std::invalid_argument
  /// if the family is not strongly convex-concave.
  explicit QuadraticFamily(Terms terms);

  /// Quadratic market payoff ||G1 x||^2 - ||G2 y||^2 - <a + c, x> + <b + c, y>
  /// with w = (a, b).
  static QuadraticFamily market(const Matrix& gamma1, const Matrix& gamma2, const Vector& c);

  Eigen::Index n() const override { return t_.P.rows(); }
  Eigen::Index m() const override { return t_.S.rows(); }
  Eigen::Index k() const override { return t_.Ux.cols(); }

  double value(const Vector& z, const Vector& w) const override;
  Vector gradient(const Vector& z, const Vector& w) const override;
  bool affine_in_w() const override { return true; }

  const Terms& terms() const { return t_; }
  const Matrix& K() const { return K_; }
  const Vector& k0() const { return k0_; }
  const Matrix& U() const { return U_; }

  /// min(lambda_min(P), lambda_min(S)).
  double strong_convexity() const { return gamma_; }
  /// max(||K||_2, ||U||_2): Lipschitz constant of g in z and in w.
  double smoothness() const { return L_; }

 private:
  Terms t_;
  Matrix K_;
  Vector k0_;
  Matrix U_;
  double gamma_ = 0.0;
  double L_ = 0.0;
};

double spectral_norm(const Matrix& A);

}  // namespace eqtrack

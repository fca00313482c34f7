#include "eqtrack/objective.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace eqtrack {

double spectral_norm(const Matrix& A) {
  if (A.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(A);
  return svd.singularValues()(0);
}

namespace {

double min_eigenvalue(const Matrix& A) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(A, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void require_shape(const Matrix& A, Eigen::Index rows, Eigen::Index cols, const char* name) {
  if (A.rows() != rows || A.cols() != cols) {
    throw DimensionMismatch(std::string(name) + " has shape " + std::to_string(A.rows()) + "x" +
                            std::to_string(A.cols()) + ", expected " + std::to_string(rows) +
                            "x" + std::to_string(cols));
  }
}

bool symmetric(const Matrix& A) {
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  return (A - A.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
}

}  // namespace

QuadraticFamily::QuadraticFamily(Terms terms) : t_(std::move(terms)) {
  const Eigen::Index n = t_.P.rows();
  const Eigen::Index m = t_.S.rows();
  const Eigen::Index k = t_.Ux.cols();
  if (n == 0 || m == 0) throw DimensionMismatch("primal and dual dimensions must be positive");
  require_shape(t_.P, n, n, "P");
  require_shape(t_.S, m, m, "S");
  require_shape(t_.R, n, m, "R");
  require_shape(t_.Ux, n, k, "Ux");
  require_shape(t_.Uy, m, k, "Uy");
  if (t_.qx.size() != n || t_.qy.size() != m) throw DimensionMismatch("linear term length");
  if (!symmetric(t_.P) || !symmetric(t_.S)) {
    throw std::invalid_argument("P and S must be symmetric");
  }

  K_.resize(n + m, n + m);
  K_ << t_.P, t_.R, -t_.R.transpose(), t_.S;
  k0_.resize(n + m);
  k0_ << t_.qx, -t_.qy;
  U_.resize(n + m, k);
  U_ << t_.Ux, -t_.Uy;

  gamma_ = std::min(min_eigenvalue(t_.P), min_eigenvalue(t_.S));
  if (!(gamma_ > 0.0)) {
    throw std::invalid_argument("objective is not strongly convex-concave (gamma = " +
                                std::to_string(gamma_) + ")");
  }
  L_ = std::max(spectral_norm(K_), spectral_norm(U_));
}

QuadraticFamily QuadraticFamily::market(const Matrix& gamma1, const Matrix& gamma2,
                                        const Vector& c) {
  const Eigen::Index n = gamma1.cols();
  if (gamma2.cols() != n || c.size() != n) {
    throw DimensionMismatch("market matrices must share the region count");
  }
  Terms t;
  t.P = 2.0 * gamma1.transpose() * gamma1;
  t.S = 2.0 * gamma2.transpose() * gamma2;
  t.R = Matrix::Zero(n, n);
  t.qx = -c;
  t.qy = c;
  t.Ux = Matrix::Zero(n, 2 * n);
  t.Ux.leftCols(n) = -Matrix::Identity(n, n);
  t.Uy = Matrix::Zero(n, 2 * n);
  t.Uy.rightCols(n) = Matrix::Identity(n, n);
  return QuadraticFamily(std::move(t));
}

double QuadraticFamily::value(const Vector& z, const Vector& w) const {
  if (z.size() != n() + m() || w.size() != k()) throw DimensionMismatch("value arguments");
  const auto x = z.head(n());
  const auto y = z.tail(m());
  return 0.5 * x.dot(t_.P * x) + x.dot(t_.R * y) - 0.5 * y.dot(t_.S * y) +
         (t_.qx + t_.Ux * w).dot(x) + (t_.qy + t_.Uy * w).dot(y);
}

Vector QuadraticFamily::gradient(const Vector& z, const Vector& w) const {
  if (z.size() != n() + m()) {
    throw DimensionMismatch("z has length " + std::to_string(z.size()) + ", expected " +
                            std::to_string(n() + m()));
  }
  if (w.size() != k()) {
    throw DimensionMismatch("w has length " + std::to_string(w.size()) + ", expected " +
                            std::to_string(k()));
  }
  return K_ * z + k0_ + U_ * w;
}

}  // namespace eqtrack

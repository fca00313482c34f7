#include "eqtrack/synthetic.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/QR>

namespace eqtrack::synthetic {

std::shared_ptr<const SaddleProblem> scalar_problem(double mu0, double eps, double sigma,
                                                    double half_width) {
  QuadraticFamily::Terms t;
  t.P = Matrix::Constant(1, 1, 1.0);
  t.S = Matrix::Constant(1, 1, 1.0);
  t.R = Matrix::Zero(1, 1);
  t.qx = Vector::Zero(1);
  t.qy = Vector::Zero(1);
  t.Ux = Matrix::Constant(1, 1, -1.0);
  t.Uy = Matrix::Zero(1, 1);
  auto family = std::make_shared<const QuadraticFamily>(std::move(t));
  Matrix shift(1, 2);
  shift << eps, 0.0;
  auto map = DistributionalMap::gaussian(Vector::Constant(1, mu0),
                                         Matrix::Constant(1, 1, sigma * sigma), std::move(shift));
  return std::make_shared<const SaddleProblem>(family, ConstraintSet::box(1, half_width),
                                               ConstraintSet::box(1, half_width), std::move(map));
}

ProblemStream scalar_drift_stream(double eps, double sigma, int horizon, double period,
                                  double amplitude) {
  std::vector<std::shared_ptr<const SaddleProblem>> slices;
  slices.reserve(static_cast<std::size_t>(horizon));
  for (int t = 0; t < horizon; ++t) {
    const double mu0 = amplitude * std::sin(2.0 * std::numbers::pi * t / period);
    slices.push_back(scalar_problem(mu0, eps, sigma));
  }
  return ProblemStream(std::move(slices));
}

Vector random_point(std::mt19937_64& rng, Eigen::Index dim, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = u(rng);
  return v;
}

namespace {

Matrix gaussian_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix a(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) a(r, c) = normal(rng);
  }
  return a;
}

Matrix random_spd(std::mt19937_64& rng, Eigen::Index dim, double lo, double hi) {
  const Matrix q = Eigen::HouseholderQR<Matrix>(gaussian_matrix(rng, dim, dim)).householderQ();
  std::uniform_real_distribution<double> u(lo, hi);
  Vector lambda(dim);
  for (Eigen::Index i = 0; i < dim; ++i) lambda(i) = u(rng);
  Matrix out = q * lambda.asDiagonal() * q.transpose();
  return 0.5 * (out + out.transpose());
}

}  // namespace

std::shared_ptr<const SaddleProblem> random_problem(std::mt19937_64& rng,
                                                    const RandomProblemSpec& spec) {
  if (spec.ratio < 0.0 || spec.ratio >= 1.0) {
    throw std::invalid_argument("eps L / gamma target must lie in [0, 1)");
  }
  QuadraticFamily::Terms t;
  t.P = random_spd(rng, spec.n, 1.0, 3.0);
  t.S = random_spd(rng, spec.m, 1.0, 3.0);
  t.R = 0.5 * gaussian_matrix(rng, spec.n, spec.m);
  t.qx = random_point(rng, spec.n, 1.0);
  t.qy = random_point(rng, spec.m, 1.0);
  t.Ux = 0.5 * gaussian_matrix(rng, spec.n, spec.k);
  t.Uy = 0.5 * gaussian_matrix(rng, spec.m, spec.k);
  auto family = std::make_shared<const QuadraticFamily>(std::move(t));

  const double eps = spec.ratio * family->strong_convexity() / family->smoothness();
  Matrix shift = gaussian_matrix(rng, spec.k, spec.n + spec.m);
  shift *= eps / spectral_norm(shift);
  const Vector mean = random_point(rng, spec.k, 1.0);
  const Matrix cov = spec.sigma * spec.sigma * Matrix::Identity(spec.k, spec.k);
  return std::make_shared<const SaddleProblem>(
      family, ConstraintSet::box(spec.n, spec.half_width),
      ConstraintSet::box(spec.m, spec.half_width),
      DistributionalMap::gaussian(mean, cov, std::move(shift)));
}

}  // namespace eqtrack::synthetic

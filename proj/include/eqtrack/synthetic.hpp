#pragma once

#include <cstdint>
#include <memory>
#include <random>

#include "eqtrack/problem.hpp"

namespace eqtrack::synthetic {

/// f = x^2/2 - y^2/2 - w x on [-half_width, half_width]^2 with
/// w ~ N(mu0 + eps x, sigma^2). The equilibrium is (mu0 / (1 - eps), 0) when
/// it lies inside the box; gamma = L = 1.
std::shared_ptr<const SaddleProblem> scalar_problem(double mu0, double eps, double sigma,
                                                    double half_width = 10.0);

/// Scalar family with mu0(t) = amplitude * sin(2 pi t / period).
ProblemStream scalar_drift_stream(double eps, double sigma, int horizon, double period = 100.0,
                                  double amplitude = 1.0);

struct RandomProblemSpec {
  int n = 5;
  int m = 5;
  int k = 4;
  double ratio = 0.5;  // target eps L / gamma
  double half_width = 3.0;
  double sigma = 1.0;
};

/// Random strongly convex-concave quadratic with eps scaled so that
/// eps L / gamma equals `spec.ratio` exactly.
std::shared_ptr<const SaddleProblem> random_problem(std::mt19937_64& rng,
                                                    const RandomProblemSpec& spec);

Vector random_point(std::mt19937_64& rng, Eigen::Index dim, double scale);

}  // namespace eqtrack::synthetic

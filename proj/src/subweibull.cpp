#include "eqtrack/subweibull.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace eqtrack {

namespace {

void check_inputs(const BoundInputs& in) {
  if (!(in.alpha >= 0.0) || !(in.alpha < 1.0)) {
    throw std::domain_error("contraction factor alpha must lie in [0, 1), got " +
                            std::to_string(in.alpha));
  }
  if (in.eta < 0.0 || in.Delta < 0.0 || in.nu < 0.0 || in.z0_error < 0.0) {
    throw std::invalid_argument("bound inputs must be non-negative");
  }
}

double transient(const BoundInputs& in, int t) {
  if (t < 0) throw std::invalid_argument("time index must be non-negative");
  return std::pow(in.alpha, t) * in.z0_error;
}

}  // namespace

double c_theta(double theta) {
  if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
  return std::pow(2.0 * std::numbers::e / theta, theta);
}

double deterministic_bound(const BoundInputs& in, int t) {
  check_inputs(in);
  return transient(in, t) + in.Delta / (1.0 - in.alpha);
}

double expectation_bound(const BoundInputs& in, int t) {
  check_inputs(in);
  return transient(in, t) + (in.Delta + in.eta * in.nu) / (1.0 - in.alpha);
}

double high_probability_bound(const BoundInputs& in, int t) {
  check_inputs(in);
  if (!(in.delta > 0.0) || !(in.delta < 1.0)) {
    throw std::domain_error("failure probability delta must lie in (0, 1)");
  }
  const double noise = c_theta(in.theta) * std::pow(std::log(2.0 / in.delta), in.theta) *
                       in.eta * in.nu / (1.0 - in.alpha);
  return transient(in, t) + in.Delta / (1.0 - in.alpha) + noise;
}

double empirical_moment_norm(std::span<const double> samples, int p) {
  if (samples.empty()) throw std::invalid_argument("no samples");
  if (p < 1) throw std::invalid_argument("moment order must be >= 1");
  double scale = 0.0;
  for (double v : samples) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  // Normalizing by the max keeps high powers finite.
  double acc = 0.0;
  for (double v : samples) acc += std::pow(std::abs(v) / scale, p);
  return scale * std::pow(acc / static_cast<double>(samples.size()), 1.0 / p);
}

SubWeibullParams fit_subweibull(std::span<const double> samples,
                                std::span<const double> theta_grid, int max_moment) {
  if (samples.size() < 100) {
    throw std::invalid_argument("sub-Weibull fit needs at least 100 samples, got " +
                                std::to_string(samples.size()));
  }
  if (theta_grid.empty()) throw std::invalid_argument("theta grid is empty");
  if (max_moment < 1) throw std::invalid_argument("max_moment must be >= 1");
  for (double v : samples) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("samples must be finite and non-negative");
    }
  }
  std::vector<double> norms(static_cast<std::size_t>(max_moment));
  for (int p = 1; p <= max_moment; ++p) norms[p - 1] = empirical_moment_norm(samples, p);

  std::vector<double> grid(theta_grid.begin(), theta_grid.end());
  std::sort(grid.begin(), grid.end());
  if (!(grid.front() > 0.0)) throw std::invalid_argument("theta grid entries must be positive");

  std::vector<double> nus;
  nus.reserve(grid.size());
  for (double theta : grid) {
    double nu = 0.0;
    for (int p = 1; p <= max_moment; ++p) {
      nu = std::max(nu, norms[p - 1] / std::pow(static_cast<double>(p), theta));
    }
    nus.push_back(nu);
  }
  const double best = *std::min_element(nus.begin(), nus.end());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (nus[i] <= best * (1.0 + 1e-12)) return {grid[i], nus[i]};
  }
  return {grid.back(), nus.back()};
}

bool certifies(std::span<const double> samples, const SubWeibullParams& params, int max_moment,
               double rel_slack) {
  for (int p = 1; p <= max_moment; ++p) {
    const double lhs = empirical_moment_norm(samples, p);
    const double rhs = params.nu * std::pow(static_cast<double>(p), params.theta);
    if (lhs > rhs * (1.0 + rel_slack)) return false;
  }
  return true;
}

SubWeibullParams closure_sum(const SubWeibullParams& a, const SubWeibullParams& b) {
  return {std::max(a.theta, b.theta), a.nu + b.nu};
}

double psi(double theta1, double theta2) {
  if (!(theta1 > 0.0) || !(theta2 > 0.0)) throw std::invalid_argument("theta must be positive");
  const double s = theta1 + theta2;
  return std::pow(s, s) / (std::pow(theta1, theta1) * std::pow(theta2, theta2));
}

SubWeibullParams closure_product(const SubWeibullParams& a, const SubWeibullParams& b) {
  return {a.theta + b.theta, psi(a.theta, b.theta) * a.nu * b.nu};
}

SubWeibullParams closure_scale(const SubWeibullParams& a, double c) {
  return {a.theta, std::abs(c) * a.nu};
}

double tail_from_moment(const SubWeibullParams& params, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(params.theta > 0.0)) throw std::invalid_argument("theta must be positive");
  if (params.nu == 0.0) return 0.0;
  const double nu1 = c_theta(params.theta) * params.nu;
  const double bound = 2.0 * std::exp(-std::pow(epsilon / nu1, 1.0 / params.theta));
  return std::clamp(bound, 0.0, 1.0);
}

}  // namespace eqtrack

#pragma once

#include <span>
#include <vector>

namespace eqtrack {

/// SW(theta, nu): ||xi||_p <= nu * p^theta for every p >= 1.
struct SubWeibullParams {
  double theta = 0.5;
  double nu = 0.0;
};

/// Inputs of the tracking bounds.
struct BoundInputs {
  double gamma_hat = 0.0;
  double eta = 0.0;
  double alpha = 0.0;
  double Delta = 0.0;
  double nu = 0.0;
  double theta = 0.5;
  double z0_error = 0.0;
  double delta = 0.05;  // failure probability for the high-probability bound
};

/// (2e / theta)^theta
double c_theta(double theta);

/// alpha^t e0 + Delta / (1 - alpha) + eta nu / (1 - alpha)
double expectation_bound(const BoundInputs& in, int t);

/// alpha^t e0 + Delta / (1 - alpha) + c(theta) log^theta(2 / delta) eta nu / (1 - alpha).
/// Holds with probability at least 1 - delta.
double high_probability_bound(const BoundInputs& in, int t);

/// alpha^t e0 + Delta / (1 - alpha): the exact-gradient envelope.
double deterministic_bound(const BoundInputs& in, int t);

/// Empirical p-norm (mean |x|^p)^(1/p).
double empirical_moment_norm(std::span<const double> samples, int p);

inline const std::vector<double>& default_theta_grid() {
  static const std::vector<double> grid{0.5, 1.0, 1.5, 2.0};
  return grid;
}

/// For each grid theta, nu(theta) = max_{p <= max_moment} ||x||_p / p^theta;
/// returns the smallest theta attaining the minimal nu. The returned pair
/// satisfies the moment characterization on `samples` for p = 1..max_moment.
SubWeibullParams fit_subweibull(std::span<const double> samples,
                                std::span<const double> theta_grid = default_theta_grid(),
                                int max_moment = 10);

/// Whether ||x||_p <= nu p^theta (with relative slack) for p = 1..max_moment.
bool certifies(std::span<const double> samples, const SubWeibullParams& params,
               int max_moment = 10, double rel_slack = 1e-12);

SubWeibullParams closure_sum(const SubWeibullParams& a, const SubWeibullParams& b);
SubWeibullParams closure_product(const SubWeibullParams& a, const SubWeibullParams& b);
SubWeibullParams closure_scale(const SubWeibullParams& a, double c);

/// (theta1 + theta2)^(theta1 + theta2) / (theta1^theta1 theta2^theta2)
double psi(double theta1, double theta2);

/// P(|xi| >= epsilon) <= min(1, 2 exp(-(theta / 2e) (epsilon / nu)^(1/theta))).
double tail_from_moment(const SubWeibullParams& params, double epsilon);

}  // namespace eqtrack

#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <optional>
#include <vector>

namespace paircraft {

// Fringe model y = c0 * (1 + V cos(k x + phi0)).
struct FringeFit {
  double c0;
  double visibility;
  double phase0;       // rad, in (-pi, pi]
  double period_k;     // angular frequency in x
  bool period_fixed;
  Eigen::MatrixXd covariance;  // over (c0, V, phi0[, k])
  double chi2;
  int iterations;
};

// Beating model y = c0 * (1 - V * sinc(omega_env*(t - tau0)) * cos(delta_omega*(t - tau0) + phi)),
// sinc(x) = sin(x)/x.
struct BeatingFit {
  double c0;
  double visibility;
  double omega_env;    // rad/s, envelope (filter) angular width
  double delta_omega;  // rad/s, beat angular frequency
  double phi;          // rad
  double tau0;         // s, envelope centre
  Eigen::MatrixXd covariance;  // over (c0, V, omega_env, delta_omega, phi, tau0)
  double chi2;
  int iterations;
};

// Weighted least squares with Poisson weights (sigma_i = sqrt(y_i), or 1
// where y_i = 0), damped Gauss-Newton, analytic Jacobians, at most 200
// iterations, gradient tolerance 1e-10. Throws std::runtime_error with
// diagnostics on non-convergence.
FringeFit fit_cosine(const std::vector<double>& x, const std::vector<double>& y,
                     std::optional<double> fixed_k = std::nullopt);

BeatingFit fit_beating(const std::vector<double>& t, const std::vector<double>& y);

// Parametric bootstrap: Poisson-resample each y_i, refit, return the sample
// standard deviation per parameter. `fit` must return the parameter vector;
// resamples that throw are skipped, more than 20% failures is an error.
std::vector<double> bootstrap_sigma(
    const std::function<Eigen::VectorXd(const std::vector<double>&, const std::vector<double>&)>& fit,
    const std::vector<double>& x, const std::vector<double>& y,
    int n_resamples, uint64_t seed);

// Convenience wrappers that refit the named model, align the phase branch
// with the central fit, and return sigmas in the struct's parameter order.
std::vector<double> bootstrap_sigma_cosine(const std::vector<double>& x,
                                           const std::vector<double>& y,
                                           std::optional<double> fixed_k,
                                           int n_resamples, uint64_t seed);
std::vector<double> bootstrap_sigma_beating(const std::vector<double>& t,
                                            const std::vector<double>& y,
                                            int n_resamples, uint64_t seed);

// E = (R11 - R12 - R21 + R22) / (R11 + R12 + R21 + R22) for counts ordered
// (R11, R12, R21, R22). All-zero input is an error.
double correlation_coefficient(const std::array<double, 4>& counts);

double sinc(double x);  // sin(x)/x, 1 at 0

}  // namespace paircraft

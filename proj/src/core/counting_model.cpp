#include "core/counting_model.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace paircraft {

void SourceModel::validate() const {
  if (pair_coeff < 0 || noise_coeff_s < 0 || noise_coeff_i < 0)
    throw std::invalid_argument("rate coefficients must be non-negative");
  auto eta_ok = [](double e) { return e >= 0.0 && e <= 1.0; };
  if (!eta_ok(eta_s) || !eta_ok(eta_i) || !eta_ok(eta_s_r) || !eta_ok(eta_i_r))
    throw std::invalid_argument("efficiencies must lie in [0, 1]");
  if (dark_s < 0 || dark_i < 0) throw std::invalid_argument("dark rates must be non-negative");
  if (window <= 0) throw std::invalid_argument("coincidence window must be positive");
}

CountPrediction predict_counts(const SourceModel& model, double power_mw) {
  model.validate();
  if (power_mw < 0) throw std::invalid_argument("power must be non-negative");
  const double r = model.pair_coeff * power_mw * power_mw;
  const double n_s = r * model.eta_s + model.noise_coeff_s * power_mw * model.eta_s_r + model.dark_s;
  const double n_i = r * model.eta_i + model.noise_coeff_i * power_mw * model.eta_i_r + model.dark_i;
  const double a_cc = n_s * n_i * model.window;
  const double c_c = r * model.eta_s * model.eta_i + a_cc;
  return {n_s, n_i, c_c, a_cc, r};
}

double car(double c_c, double a_cc) {
  if (c_c < 0 || a_cc < 0) throw std::domain_error("rates must be non-negative");
  if (a_cc == 0) throw std::domain_error("CAR undefined: zero accidental rate");
  return c_c / a_cc;
}

RateInversion invert_rates(double n_s, double n_i, double c_c, double a_cc,
                           double dark_s, double dark_i,
                           double noise_s, double noise_i) {
  const double true_cc = c_c - a_cc;
  if (true_cc <= 0)
    throw std::domain_error("inversion requires coincidences above the accidental rate");
  const double pair_s = n_s - noise_s - dark_s;  // R * eta_s
  const double pair_i = n_i - noise_i - dark_i;  // R * eta_i
  if (pair_s <= 0 || pair_i <= 0)
    throw std::domain_error("singles do not exceed the noise and dark contributions");
  RateInversion out;
  out.eta_i = true_cc / pair_s;
  out.eta_s = true_cc / pair_i;
  out.pair_rate = pair_s * pair_i / true_cc;
  return out;
}

PowerSweepFit fit_power_sweep(const std::vector<double>& power_mw,
                              const std::vector<double>& counts_hz, int degree) {
  if (degree != 1 && degree != 2) throw std::invalid_argument("degree must be 1 or 2");
  const size_t n = power_mw.size();
  if (counts_hz.size() != n) throw std::invalid_argument("power and count arrays differ in size");
  const size_t p = static_cast<size_t>(degree) + 1;
  if (n < p + 1) throw std::invalid_argument("need at least degree + 2 sweep points");
  if (std::set<double>(power_mw.begin(), power_mw.end()).size() < p)
    throw std::invalid_argument("sweep powers are degenerate");

  Eigen::MatrixXd design(n, p);
  Eigen::VectorXd y(n);
  for (size_t i = 0; i < n; ++i) {
    double x = 1.0;
    for (size_t j = 0; j < p; ++j) {
      design(i, p - 1 - j) = x;  // highest degree first
      x *= power_mw[i];
    }
    y(i) = counts_hz[i];
  }

  const Eigen::MatrixXd gram = design.transpose() * design;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  if (!lu.isInvertible()) throw std::runtime_error("power-sweep design matrix is rank deficient");
  const Eigen::VectorXd beta = lu.solve(design.transpose() * y);

  const Eigen::VectorXd resid = y - design * beta;
  const double rss = resid.squaredNorm();
  const double dof = static_cast<double>(n - p);
  const double s2 = dof > 0 ? rss / dof : 0.0;

  PowerSweepFit fit;
  fit.coeffs = beta;
  fit.covariance = lu.inverse() * s2;
  fit.degree = degree;
  fit.rss = rss;

  const auto [pmin, pmax] = std::minmax_element(power_mw.begin(), power_mw.end());
  fit.nonneg_over_range = true;
  for (int i = 0; i <= 200; ++i) {
    const double x = *pmin + (*pmax - *pmin) * i / 200.0;
    double v = 0.0;
    for (Eigen::Index j = 0; j < beta.size(); ++j) v = v * x + beta(j);
    if (v < 0) { fit.nonneg_over_range = false; break; }
  }
  return fit;
}

double solve_noise_for_car(double pair_rate, double eta_s, double eta_i,
                           double dark_s, double dark_i, double window,
                           double car_target) {
  if (car_target <= 1.0) throw std::domain_error("CAR target must exceed 1");
  const double n_s0 = pair_rate * eta_s + dark_s;
  const double n_i0 = pair_rate * eta_i + dark_i;
  const double product_target = pair_rate * eta_s * eta_i / ((car_target - 1.0) * window);
  // (n_s0 + L)(n_i0 + L) = product_target, take the positive root
  const double b = n_s0 + n_i0;
  const double c = n_s0 * n_i0 - product_target;
  const double disc = b * b - 4.0 * c;
  if (disc < 0 || c > 0)
    throw std::domain_error("CAR target unreachable: accidentals already exceed it at zero noise");
  return (-b + std::sqrt(disc)) / 2.0;
}

SourceModel reference_source_model() {
  const double pair_rate = 52.3e3;  // Hz at the calibration power
  const double p0 = 0.273;          // mW
  SourceModel m;
  m.pair_coeff = pair_rate / (p0 * p0);
  m.eta_s = 0.27;
  m.eta_i = 0.23;
  m.eta_s_r = m.eta_s;
  m.eta_i_r = m.eta_i;
  m.dark_s = 150.0;
  m.dark_i = 150.0;
  m.window = 300.0 * 1e-12;  // matches the parsed form of "300 ps"
  const double noise = solve_noise_for_car(pair_rate, m.eta_s, m.eta_i, m.dark_s,
                                           m.dark_i, m.window, 52600.0);
  m.noise_coeff_s = noise / (p0 * m.eta_s_r);  // generated rate per mW
  m.noise_coeff_i = noise / (p0 * m.eta_i_r);
  return m;
}

}  // namespace paircraft

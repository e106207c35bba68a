#pragma once

#include <Eigen/Dense>
#include <vector>

namespace paircraft {

// Rate model for a CW-pumped pair source with Raman-noise sidebands:
//   pair rate        R   = pair_coeff * P^2          (cascaded process)
//   noise rates      R_s = noise_coeff_s * P, R_i = noise_coeff_i * P
//   singles          N_s = R*eta_s + R_s*eta_s_r + dark_s   (idler analogous)
//   coincidences     C_c = R*eta_s*eta_i + A_cc
//   accidentals      A_cc = N_s * N_i * window
// All rates in Hz, powers in mW, window in seconds.
struct SourceModel {
  double pair_coeff = 0.0;    // Hz/mW^2
  double noise_coeff_s = 0.0; // Hz/mW
  double noise_coeff_i = 0.0; // Hz/mW
  double eta_s = 1.0;         // pair collection+detection, signal side
  double eta_i = 1.0;
  double eta_s_r = 1.0;       // noise-photon collection+detection
  double eta_i_r = 1.0;
  double dark_s = 0.0;        // Hz
  double dark_i = 0.0;        // Hz
  double window = 0.0;        // s

  void validate() const;      // throws on out-of-range fields
};

struct CountPrediction {
  double n_s;        // Hz
  double n_i;        // Hz
  double c_c;        // Hz
  double a_cc;       // Hz
  double pair_rate;  // generated pairs, Hz
};

CountPrediction predict_counts(const SourceModel& model, double power_mw);

// Coincidence-to-accidental ratio. a_cc must be positive.
double car(double c_c, double a_cc);

struct RateInversion {
  double pair_rate;
  double eta_s;
  double eta_i;
};

// Invert the count model for (R, eta_s, eta_i) given measured rates. The
// linear noise contributions noise_s = R_s*eta_s_r, noise_i = R_i*eta_i_r
// (Hz, at the measurement power) are passed explicitly, e.g. from the
// linear component of fit_power_sweep.
RateInversion invert_rates(double n_s, double n_i, double c_c, double a_cc,
                           double dark_s, double dark_i,
                           double noise_s, double noise_i);

struct PowerSweepFit {
  Eigen::VectorXd coeffs;      // highest degree first: [quadratic, linear, const]
  Eigen::MatrixXd covariance;  // same ordering
  int degree;
  double rss;                  // residual sum of squares
  bool nonneg_over_range;      // fitted curve >= 0 over the fitted power range
};

// Unweighted least-squares polynomial fit of counts vs power.
// Requires degree in {1, 2} and at least degree + 2 distinct powers.
PowerSweepFit fit_power_sweep(const std::vector<double>& power_mw,
                              const std::vector<double>& counts_hz, int degree = 2);

// Model calibrated to the reference CW operating point: 52.3 kHz generated
// pairs at 0.273 mW, eta_s = 0.27, eta_i = 0.23, 150 Hz darks, 300 ps
// window, with symmetric linear noise chosen so CAR = 52,600 there. The
// operating point is reproduced by construction, not predicted.
SourceModel reference_source_model();

// Solve for the symmetric per-side linear noise rate (Hz at power_mw) that
// yields the requested CAR given the other model parameters.
double solve_noise_for_car(double pair_rate, double eta_s, double eta_i,
                           double dark_s, double dark_i, double window,
                           double car_target);

}  // namespace paircraft

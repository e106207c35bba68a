#include "core/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "core/counting_model.hpp"
#include "core/estimators.hpp"
#include "core/fixtures.hpp"
#include "core/quantum_state.hpp"
#include "core/rng.hpp"
#include "core/run_config.hpp"
#include "core/spectral_model.hpp"
#include "core/timetag_sim.hpp"
#include "core/tomography.hpp"

namespace paircraft {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return std::string(buf);
}

// Relative error with a floor on the denominator, so comparisons near a
// fringe null are judged against the fringe amplitude instead of blowing up.
double relative_error(double got, double want, double scale) {
  return std::abs(got - want) / std::max(std::abs(want), scale);
}

double wrap_difference(double a, double b) {
  return std::atan2(std::sin(a - b), std::cos(a - b));
}

// ---------------------------------------------------------------------------
// 1. Reference count table -> density matrix, fidelity and diagonal targets.

CriterionResult criterion_reference_tomography() {
  CriterionResult r{1, "reference count table tomography", false, 0.0, 1.0, ""};
  const auto t0 = Clock::now();

  const ProjectionCountTable table = reference_projection_counts();
  const LinearReconstruction lin = reconstruct_linear(table);
  const DensityMatrix rho = project_physical(lin.rho);
  const double f = fidelity(rho, bell_state("phi_plus"));

  const ReferenceTomoTargets targets = reference_tomo_targets();
  double max_diag_err = 0.0;
  for (int d = 0; d < 4; ++d) {
    max_diag_err = std::max(max_diag_err,
                            std::abs(rho.matrix()(d, d).real() - targets.diag[d]));
  }
  r.elapsed_s = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool fidelity_ok = std::abs(f - targets.fidelity) <= targets.fidelity_band;
  const bool diag_ok = max_diag_err <= targets.diag_tolerance;
  r.pass = fidelity_ok && diag_ok && r.elapsed_s < r.limit_s;
  r.detail = fmt("fidelity %.4f (target %.4f +- %.4f), max diagonal error %.4f (<= %.2f)",
                 f, targets.fidelity, targets.fidelity_band, max_diag_err,
                 targets.diag_tolerance);
  return r;
}

// ---------------------------------------------------------------------------
// 2. Frequency-order density matrix closed-form fidelity.

CriterionResult criterion_freqbin_fidelity() {
  CriterionResult r{2, "frequency-order fidelity closed form", false, 0.0, 1e-3, ""};
  const FreqBinParams p{0.502, 0.9685, 0.182};
  const PureState target = bell_state("psi_swap_freq");

  const auto t0 = Clock::now();
  const DensityMatrix rho = freqbin_density(p);
  const double f = fidelity(rho, target);
  r.elapsed_s = std::chrono::duration<double>(Clock::now() - t0).count();

  const double closed = 0.5 * (1.0 + p.v * std::cos(p.phi));
  const bool matches_closed = std::abs(f - closed) < 1e-12;
  const bool matches_reference = std::abs(f - 0.9756) <= 0.0025;
  r.pass = matches_closed && matches_reference && r.elapsed_s < r.limit_s;
  r.detail = fmt("fidelity %.6f, closed form %.6f, reference 0.9756 +- 0.0025", f, closed);
  return r;
}

// ---------------------------------------------------------------------------
// 3. Visibility -> S arithmetic.

CriterionResult criterion_chsh_arithmetic() {
  CriterionResult r{3, "visibility to S-value arithmetic", false, 0.0, 1e-3, ""};
  const auto t0 = Clock::now();
  const double s1 = chsh_from_visibility(0.9175).s_value;
  const double s2 = chsh_from_visibility(0.9574).s_value;
  r.elapsed_s = std::chrono::duration<double>(Clock::now() - t0).count();
  r.pass = std::abs(s1 - 2.595) <= 1e-3 && std::abs(s2 - 2.708) <= 1e-3 &&
           r.elapsed_s < r.limit_s;
  r.detail = fmt("S(0.9175) = %.4f (2.595 +- 0.001), S(0.9574) = %.4f (2.708 +- 0.001)",
                 s1, s2);
  return r;
}

// ---------------------------------------------------------------------------
// 4. Spectral grid vs the band-averaged closed forms, plus period halving.

CriterionResult criterion_grid_vs_closed_forms(std::uint64_t seed) {
  CriterionResult r{4, "spectral grid vs closed forms", false, 0.0, 30.0, ""};
  const auto t0 = Clock::now();

  const RunConfig base = RunConfig::defaults();
  const double omega_p = base.omega_p0();
  const double omega_s = base.omega_s0();
  const double delta0 = 2.0 * (omega_s - omega_p);  // signal-idler beat detuning
  const double window = 300e-12;
  const int n_cells = 32768;
  const double tol = 1e-3;

  Rng rng = Rng(seed).fork(4);
  double worst = 0.0;
  int n_bad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const double mu = rng.uniform_in(0.5, 2.0);
    const double bw = 2.0 * M_PI * rng.uniform_in(80e9, 160e9);
    const double tau_ab = rng.uniform_in(200e-12, 900e-12);
    const double phi = rng.uniform_in(0.0, 2.0 * M_PI);
    const double eta_a = rng.uniform_in(0.3, 1.0);
    const double eta_b = rng.uniform_in(0.3, 1.0);
    const double tau = rng.uniform_in(-30e-12, 30e-12);

    const double span = 4.0 * std::abs(omega_s - omega_p) + 4.0 * bw;
    const SpectralState source = SpectralState::build_cw(omega_p, span, n_cells, mu);
    const FilterSpec fa{omega_s, bw};
    const FilterSpec fb{2.0 * omega_p - omega_s, bw};

    const UmziConfig umzi{tau_ab, phi};
    const SpectralState fringe = apply_umzi(source, umzi, TemporalFilter::central_peak);
    const double same = coincidence_same_port(fringe, fa, fb, window, eta_a, eta_b);
    const double cross = coincidence_cross_port(fringe, fa, fb, window, eta_a, eta_b);

    const double amp = eta_a * eta_b * mu / 8.0;
    const double big_phi = 2.0 * omega_p * tau_ab + 2.0 * phi;
    const double same_closed = amp * (1.0 + std::cos(big_phi));
    const double cross_closed = amp * (1.0 - std::cos(big_phi));

    const UmziConfig anti_umzi{tau_ab, antibunched_phase(omega_p, tau_ab)};
    const SpectralState anti = apply_umzi(source, anti_umzi, TemporalFilter::central_peak);
    const double beat = quantum_beating(anti, tau, fa, fb, M_SQRT1_2, eta_a, eta_b);
    const double beat_closed =
        amp * (1.0 - sinc(bw * tau) * std::cos(delta0 * tau));

    const double err = std::max({relative_error(same, same_closed, amp),
                                 relative_error(cross, cross_closed, amp),
                                 relative_error(beat, beat_closed, amp)});
    worst = std::max(worst, err);
    if (err > tol) ++n_bad;
  }

  // Coincidence fringe in phi_a runs at twice the single-photon frequency.
  const double tau_ab = 625e-12;
  const double bw = base.filter_bandwidth_rad();
  const double span = base.grid_span();
  const SpectralState source = SpectralState::build_cw(omega_p, span, 4096, 1.0);
  const FilterSpec fa{omega_s, bw};
  const FilterSpec fb{2.0 * omega_p - omega_s, bw};
  std::vector<double> phis, pair_rate, single_rate;
  for (int i = 0; i < 48; ++i) {
    const double phi = 2.0 * M_PI * i / 48.0;
    const UmziConfig umzi{tau_ab, phi};
    const SpectralState fringe = apply_umzi(source, umzi, TemporalFilter::central_peak);
    phis.push_back(phi);
    pair_rate.push_back(coincidence_same_port(fringe, fa, fb, window));
    single_rate.push_back(single_photon_interference(omega_s, umzi));
  }
  const FringeFit pair_fit = fit_cosine(phis, pair_rate);
  const FringeFit single_fit = fit_cosine(phis, single_rate);
  const double period_ratio = pair_fit.period_k / single_fit.period_k;

  r.elapsed_s = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool halved = std::abs(period_ratio - 2.0) <= 1e-6;
  r.pass = n_bad == 0 && halved && r.elapsed_s < r.limit_s;
  r.detail = fmt("worst relative error %.2e over 100 configs (tol 1e-3), "
                 "pair/single period ratio %.8f",
                 worst, period_ratio);
  return r;
}

// ---------------------------------------------------------------------------
// 5. Beating parameter recovery with bootstrap uncertainties.

CriterionResult criterion_beating_roundtrip(std::uint64_t seed) {
  CriterionResult r{5, "beating fit round-trip", false, 0.0, 120.0, ""};
  const auto t0 = Clock::now();

  const double c0 = 300.0;
  const double vis = 0.9685;
  const double omega_env = 2.0 * M_PI * 116.4e9;
  const double delta_omega = 2.220e12;
  const double phi = 0.182;

  std::vector<double> t, model;
  for (double ti = -30e-12; ti <= 30.0001e-12; ti += 0.25e-12) {
    t.push_back(ti);
    model.push_back(c0 * (1.0 - vis * sinc(omega_env * ti) *
                                    std::cos(delta_omega * ti + phi)));
  }

  Rng master = Rng(seed).fork(5);
  const int n_trials = 100;
  int n_ok = 0;
  int n_fit_failures = 0;
  for (int trial = 0; trial < n_trials; ++trial) {
    Rng rng = master.fork(trial);
    std::vector<double> y(model.size());
    for (std::size_t i = 0; i < model.size(); ++i)
      y[i] = static_cast<double>(rng.poisson(model[i]));
    try {
      const BeatingFit fit = fit_beating(t, y);
      const std::vector<double> sig =
          bootstrap_sigma_beating(t, y, 50, seed + 1000 + trial);
      const bool ok = std::abs(fit.visibility - vis) <= 3.0 * sig[1] &&
                      std::abs(fit.omega_env - omega_env) <= 3.0 * sig[2] &&
                      std::abs(fit.delta_omega - delta_omega) <= 3.0 * sig[3] &&
                      std::abs(wrap_difference(fit.phi, phi)) <= 3.0 * sig[4];
      if (ok) ++n_ok;
    } catch (const std::exception&) {
      ++n_fit_failures;
    }
  }

  r.elapsed_s = std::chrono::duration<double>(Clock::now() - t0).count();
  r.pass = n_ok >= 95 && r.elapsed_s < r.limit_s;
  r.detail = fmt("%d/%d trials with all of (V, envelope, beat, phase) within "
                 "3 bootstrap sigma (need >= 95), %d fit failures",
                 n_ok, n_trials, n_fit_failures);
  return r;
}

// ---------------------------------------------------------------------------
// 6. Monte-Carlo counting chain vs the analytic rate model.

CriterionResult criterion_counting_consistency(std::uint64_t seed) {
  CriterionResult r{6, "monte-carlo counting consistency", false, 0.0, 120.0, ""};
  const auto t0 = Clock::now();

  const SourceModel model = reference_source_model();

  // Calibrated operating point, reproduced by construction.
  const CountPrediction at_ref = predict_counts(model, 0.273);
  const double car_ref = car(at_ref.c_c, at_ref.a_cc);
  const bool calibration_ok = std::abs(car_ref - 52600.0) / 52600.0 < 1e-3;

  // Shape of the analytic CAR-vs-power curve: one interior maximum.
  bool unimodal = true;
  std::size_t argmax = 0;
  {
    std::vector<double> cars;
    for (int i = 0; i < 60; ++i) {
      const double p = 1e-3 * std::pow(30.0 / 1e-3, i / 59.0);
      const CountPrediction pred = predict_counts(model, p);
      cars.push_back(car(pred.c_c, pred.a_cc));
    }
    argmax = std::max_element(cars.begin(), cars.end()) - cars.begin();
    unimodal = argmax > 0 && argmax + 1 < cars.size();
    for (std::size_t i = 0; i + 1 < cars.size() && unimodal; ++i) {
      if (i < argmax && cars[i + 1] <= cars[i]) unimodal = false;
      if (i >= argmax && cars[i + 1] >= cars[i]) unimodal = false;
    }
  }

  // Monte-Carlo comparison. The simulated peak is jitter-broadened, so the
  // counting window is widened to capture it fully and the analytic model
  // is evaluated with the same window; dead time is off because the rate
  // model carries no pile-up correction.
  SourceModel wide = model;
  wide.window = 1200e-12;
  DetectorModel det{1.0, model.dark_s, 100e-12, 0.0};
  const std::int64_t bin_ps = 300;
  const std::int64_t window_ps = 1200;
  const std::int64_t span_ps = 144000;
  std::vector<std::int64_t> offsets;
  for (int k = 2; k <= 30; ++k) {
    offsets.push_back(k * window_ps);
    offsets.push_back(-k * window_ps);
  }

  bool mc_ok = true;
  double worst_pull = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double p = 0.15 * std::pow(2.5 / 0.15, i / 9.0);
    const CountPrediction pred = predict_counts(wide, p);
    const double duration = std::clamp(25.0 / pred.a_cc, 0.5, 30.0);
    const SimulatedStreams streams =
        simulate_cw(wide, det, det, p, duration, seed + 600 + i);
    const CoincidenceHistogram hist =
        histogram_coincidences(streams.signal, streams.idler, bin_ps, span_ps);
    const WindowCounts wc = window_counts(hist, window_ps, 0, offsets);

    const double car_mc = wc.coincidences / wc.accidentals;
    const double car_an = car(pred.c_c, pred.a_cc);
    const double total_acc = wc.accidentals * static_cast<double>(offsets.size());
    const double sigma = car_mc * std::sqrt(1.0 / wc.coincidences + 1.0 / total_acc);
    const double pull = std::abs(car_mc - car_an) / sigma;
    worst_pull = std::max(worst_pull, pull);
    if (pull > 3.0) mc_ok = false;
  }

  r.elapsed_s = std::chrono::duration<double>(Clock::now() - t0).count();
  r.pass = calibration_ok && unimodal && mc_ok && r.elapsed_s < r.limit_s;
  r.detail = fmt("CAR(0.273 mW) = %.0f (52600 by construction), curve unimodal: %s, "
                 "worst MC pull %.2f sigma over 10 powers (<= 3)",
                 car_ref, unimodal ? "yes" : "no", worst_pull);
  return r;
}

// ---------------------------------------------------------------------------
// 7. Tomography round-trip, exact and Poisson-sampled.

DensityMatrix random_physical_state(Rng& rng) {
  Eigen::Matrix4cd g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      g(i, j) = std::complex<double>(rng.gaussian(), rng.gaussian());
  Eigen::Matrix4cd m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix(m, Basis::timebin);
}

DensityMatrix random_near_bell_state(Rng& rng) {
  const Eigen::Vector4cd psi = bell_state("phi_plus").amps();
  const double eps = rng.uniform_in(0.0, 0.15);
  const DensityMatrix noise = random_physical_state(rng);
  const Eigen::Matrix4cd m =
      (1.0 - eps) * (psi * psi.adjoint()) + eps * noise.matrix();
  return DensityMatrix(m, Basis::timebin);
}

ProjectionCountTable poisson_sample_counts(const ProjectionCountTable& exact, Rng& rng) {
  std::vector<ProjectionRow> rows = exact.rows();
  for (ProjectionRow& row : rows) {
    row.n = static_cast<double>(rng.poisson(row.n));
    row.set_counts = {};
  }
  return ProjectionCountTable(std::move(rows));
}

CriterionResult criterion_tomography_roundtrip(std::uint64_t seed) {
  CriterionResult r{7, "tomography round-trip", false, 0.0, 60.0, ""};
  const auto t0 = Clock::now();

  Rng rng = Rng(seed).fork(7);
  const PureState target = bell_state("phi_plus");

  double worst_frob = 0.0;
  for (int i = 0; i < 50; ++i) {
    const DensityMatrix rho = random_physical_state(rng);
    const ProjectionCountTable counts = expected_counts(rho, 143464.0);
    const LinearReconstruction lin = reconstruct_linear(counts);
    worst_frob = std::max(worst_frob, (lin.rho.matrix() - rho.matrix()).norm());
  }
  const bool exact_ok = worst_frob < 1e-9;

  int n_outside = 0;
  double worst_pull = 0.0;
  for (int i = 0; i < 50; ++i) {
    const DensityMatrix rho = random_near_bell_state(rng);
    const double f_true = fidelity(rho, target);
    const ProjectionCountTable exact = expected_counts(rho, 143464.0);
    const ProjectionCountTable sampled = poisson_sample_counts(exact, rng);
    const double f_rec =
        fidelity(project_physical(reconstruct_linear(sampled).rho), target);

    std::vector<double> boots;
    for (int b = 0; b < 40; ++b) {
      Rng boot_rng = rng.fork(1000 + 64 * i + b);
      const ProjectionCountTable resampled = poisson_sample_counts(sampled, boot_rng);
      boots.push_back(
          fidelity(project_physical(reconstruct_linear(resampled).rho), target));
    }
    double mean = 0.0;
    for (double b : boots) mean += b;
    mean /= boots.size();
    double var = 0.0;
    for (double b : boots) var += (b - mean) * (b - mean);
    const double sigma = std::sqrt(var / (boots.size() - 1));

    const double pull = std::abs(f_rec - f_true) / sigma;
    worst_pull = std::max(worst_pull, pull);
    if (pull > 3.0) ++n_outside;
  }

  r.elapsed_s = std::chrono::duration<double>(Clock::now() - t0).count();
  r.pass = exact_ok && n_outside == 0 && r.elapsed_s < r.limit_s;
  r.detail = fmt("worst exact Frobenius error %.2e (< 1e-9), worst sampled "
                 "fidelity pull %.2f sigma over 50 states (<= 3)",
                 worst_frob, worst_pull);
  return r;
}

// ---------------------------------------------------------------------------
// 8. Rate inversion undoes the forward count model.

CriterionResult criterion_rate_inversion(std::uint64_t seed) {
  CriterionResult r{8, "rate inversion round-trip", false, 0.0, 1.0, ""};
  const auto t0 = Clock::now();

  Rng rng = Rng(seed).fork(8);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    SourceModel m;
    m.pair_coeff = rng.uniform_in(1e3, 1e6);
    m.noise_coeff_s = rng.uniform_in(0.0, 1e4);
    m.noise_coeff_i = rng.uniform_in(0.0, 1e4);
    m.eta_s = rng.uniform_in(0.05, 1.0);
    m.eta_i = rng.uniform_in(0.05, 1.0);
    m.eta_s_r = rng.uniform_in(0.05, 1.0);
    m.eta_i_r = rng.uniform_in(0.05, 1.0);
    m.dark_s = rng.uniform_in(0.0, 1e3);
    m.dark_i = rng.uniform_in(0.0, 1e3);
    m.window = rng.uniform_in(50e-12, 1000e-12);
    const double p = rng.uniform_in(0.01, 10.0);

    const CountPrediction pred = predict_counts(m, p);
    const RateInversion inv = invert_rates(
        pred.n_s, pred.n_i, pred.c_c, pred.a_cc, m.dark_s, m.dark_i,
        m.noise_coeff_s * p * m.eta_s_r, m.noise_coeff_i * p * m.eta_i_r);

    worst = std::max({worst,
                      std::abs(inv.pair_rate - pred.pair_rate) / pred.pair_rate,
                      std::abs(inv.eta_s - m.eta_s) / m.eta_s,
                      std::abs(inv.eta_i - m.eta_i) / m.eta_i});
  }

  r.elapsed_s = std::chrono::duration<double>(Clock::now() - t0).count();
  r.pass = worst < 1e-9 && r.elapsed_s < r.limit_s;
  r.detail = fmt("worst relative error %.2e over 1000 models (< 1e-9)", worst);
  return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance_suite(std::uint64_t seed) {
  std::vector<CriterionResult> results;
  results.push_back(criterion_reference_tomography());
  results.push_back(criterion_freqbin_fidelity());
  results.push_back(criterion_chsh_arithmetic());
  results.push_back(criterion_grid_vs_closed_forms(seed));
  results.push_back(criterion_beating_roundtrip(seed));
  results.push_back(criterion_counting_consistency(seed));
  results.push_back(criterion_tomography_roundtrip(seed));
  results.push_back(criterion_rate_inversion(seed));
  return results;
}

std::string format_acceptance_report(const std::vector<CriterionResult>& results) {
  std::ostringstream out;
  for (const CriterionResult& r : results) {
    out << r.id << " " << (r.pass ? "PASS" : "FAIL") << " " << r.name << " ["
        << fmt("%.2f", r.elapsed_s) << " s < " << fmt("%g", r.limit_s) << " s] — "
        << r.detail << "\n";
  }
  out << (all_passed(results) ? "ALL PASS" : "FAILURES PRESENT") << "\n";
  return out.str();
}

bool all_passed(const std::vector<CriterionResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CriterionResult& r) { return r.pass; });
}

}  // namespace paircraft

#include "paircraft.h"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/acceptance.hpp"
#include "core/counting_model.hpp"
#include "core/estimators.hpp"
#include "core/io.hpp"
#include "core/quantum_state.hpp"
#include "core/run_config.hpp"
#include "core/spectral_model.hpp"
#include "core/timetag_sim.hpp"
#include "core/tomography.hpp"
#include "core/units.hpp"

using nlohmann::json;

struct paircraft_config {
  paircraft::KeyValueConfig kv;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
paircraft_status guarded(Fn&& fn) {
  try {
    fn();
    return PAIRCRAFT_OK;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return PAIRCRAFT_ERR_INVALID_ARGUMENT;
  } catch (const std::domain_error& e) {
    g_last_error = e.what();
    return PAIRCRAFT_ERR_DOMAIN;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PAIRCRAFT_ERR_RUNTIME;
  } catch (...) {
    g_last_error = "unknown error";
    return PAIRCRAFT_ERR_RUNTIME;
  }
}

paircraft_status require(bool ok, const char* what) {
  if (ok) return PAIRCRAFT_OK;
  g_last_error = std::string(what) + " must not be NULL";
  return PAIRCRAFT_ERR_NULL_POINTER;
}

json matrix_json(const paircraft::DensityMatrix& rho) {
  return paircraft::density_matrix_to_json(rho);
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

paircraft::DensityMatrix resolve_state(const std::string& spec) {
  static const char* names[] = {"phi_plus", "phi_minus", "psi_plus", "psi_minus"};
  for (const char* name : names) {
    if (spec == name) {
      const Eigen::Vector4cd v = paircraft::bell_state(name).amps();
      return paircraft::DensityMatrix(v * v.adjoint(), paircraft::Basis::timebin);
    }
  }
  return paircraft::read_density_matrix(spec);
}

}  // namespace

extern "C" {

const char* paircraft_version(void) { return "1.0.0"; }

const char* paircraft_last_error(void) { return g_last_error.c_str(); }

void paircraft_string_free(char* s) { std::free(s); }

/* ------------------------------------------------------------------ */

paircraft_status paircraft_config_create(paircraft_config** out) {
  if (auto st = require(out, "out")) return st;
  return guarded([&] { *out = new paircraft_config(); });
}

paircraft_status paircraft_config_load(paircraft_config* cfg, const char* path) {
  if (auto st = require(cfg, "cfg")) return st;
  if (auto st = require(path, "path")) return st;
  return guarded([&] {
    const auto loaded = paircraft::KeyValueConfig::from_file(path);
    for (const auto& [key, value] : loaded.entries()) cfg->kv.set(key, value);
  });
}

paircraft_status paircraft_config_set(paircraft_config* cfg, const char* key,
                                      const char* value) {
  if (auto st = require(cfg, "cfg")) return st;
  if (auto st = require(key, "key")) return st;
  if (auto st = require(value, "value")) return st;
  return guarded([&] { cfg->kv.set(key, value); });
}

paircraft_status paircraft_config_describe(const paircraft_config* cfg,
                                           char** json_out) {
  if (auto st = require(cfg, "cfg")) return st;
  if (auto st = require(json_out, "json_out")) return st;
  return guarded([&] {
    const paircraft::RunConfig rc = paircraft::RunConfig::from_config(cfg->kv);
    json j;
    j["pump_wavelength_m"] = rc.pump_wavelength_m;
    j["signal_wavelength_m"] = rc.signal_wavelength_m;
    j["idler_wavelength_m"] = 2.0 * M_PI * paircraft::kSpeedOfLight / rc.omega_i0();
    j["filter_bandwidth_hz"] = rc.filter_bandwidth_hz;
    j["umzi"] = {{"delay_s", rc.umzi_delay_s},
                 {"phase_rad", rc.umzi_phase_rad},
                 {"split_ratio", rc.umzi_split_ratio}};
    j["grid"] = {{"points", rc.grid_points}, {"span_rad", rc.grid_span()}};
    j["mu_c"] = rc.mu_c;
    j["source"] = {{"pair_coeff", rc.source.pair_coeff},
                   {"noise_coeff_s", rc.source.noise_coeff_s},
                   {"noise_coeff_i", rc.source.noise_coeff_i},
                   {"eta_s", rc.source.eta_s},
                   {"eta_i", rc.source.eta_i},
                   {"eta_s_r", rc.source.eta_s_r},
                   {"eta_i_r", rc.source.eta_i_r},
                   {"dark_s", rc.source.dark_s},
                   {"dark_i", rc.source.dark_i},
                   {"window_s", rc.source.window}};
    auto det_json = [](const paircraft::DetectorModel& d) {
      return json{{"efficiency", d.efficiency},
                  {"dark_rate", d.dark_rate},
                  {"jitter_sigma_s", d.jitter_sigma},
                  {"dead_time_s", d.dead_time}};
    };
    j["detector_s"] = det_json(rc.detector_s);
    j["detector_i"] = det_json(rc.detector_i);
    j["power_mw"] = rc.power_mw;
    j["duration_s"] = rc.duration_s;
    j["seed"] = rc.seed;
    j["pulses"] = {{"rep_rate_hz", rc.pulses.rep_rate_hz},
                   {"interval_ps", rc.pulses.pulse_interval_ps},
                   {"width_ps", rc.pulses.pulse_width_ps},
                   {"extinction_db", rc.pulses.extinction_ratio_db}};
    j["freqbin"] = {{"a", rc.freqbin.a}, {"v", rc.freqbin.v}, {"phi", rc.freqbin.phi}};
    *json_out = dup_string(j.dump(2));
  });
}

void paircraft_config_free(paircraft_config* cfg) { delete cfg; }

/* ------------------------------------------------------------------ */

paircraft_status paircraft_simulate_cw(const paircraft_config* cfg,
                                       const char* signal_csv,
                                       const char* idler_csv,
                                       char** summary_json) {
  if (auto st = require(cfg, "cfg")) return st;
  if (auto st = require(signal_csv, "signal_csv")) return st;
  if (auto st = require(idler_csv, "idler_csv")) return st;
  return guarded([&] {
    const paircraft::RunConfig rc = paircraft::RunConfig::from_config(cfg->kv);
    const paircraft::SimulatedStreams streams = paircraft::simulate_cw(
        rc.source, rc.detector_s, rc.detector_i, rc.power_mw, rc.duration_s, rc.seed);
    paircraft::write_events_csv(signal_csv, streams.signal);
    paircraft::write_events_csv(idler_csv, streams.idler);
    if (summary_json) {
      json j{{"signal_events", streams.signal.size()},
             {"idler_events", streams.idler.size()},
             {"power_mw", rc.power_mw},
             {"duration_s", rc.duration_s},
             {"seed", rc.seed}};
      *summary_json = dup_string(j.dump(2));
    }
  });
}

paircraft_status paircraft_simulate_timebin(const paircraft_config* cfg,
                                            const char* state,
                                            double alpha, double beta,
                                            unsigned long long n_pairs,
                                            double background_rate,
                                            const char* out_json,
                                            char** summary_json) {
  if (auto st = require(cfg, "cfg")) return st;
  if (auto st = require(state, "state")) return st;
  if (auto st = require(out_json, "out_json")) return st;
  return guarded([&] {
    const paircraft::RunConfig rc = paircraft::RunConfig::from_config(cfg->kv);
    const paircraft::DensityMatrix rho = resolve_state(state);
    const paircraft::TimebinOutcomeTable table = paircraft::sample_timebin_outcomes(
        rho, alpha, beta, n_pairs, background_rate, rc.seed);
    paircraft::save_json(out_json, table.to_json());
    if (summary_json) {
      json j{{"n_pairs", table.n_pairs},
             {"recorded", table.total_recorded()},
             {"lost", table.lost},
             {"alpha", table.alpha},
             {"beta", table.beta},
             {"seed", rc.seed}};
      *summary_json = dup_string(j.dump(2));
    }
  });
}

/* ------------------------------------------------------------------ */

paircraft_status paircraft_analyze_car(const paircraft_config* cfg,
                                       const char* signal_csv,
                                       const char* idler_csv,
                                       const char* histogram_csv,
                                       char** report_json) {
  if (auto st = require(cfg, "cfg")) return st;
  if (auto st = require(signal_csv, "signal_csv")) return st;
  if (auto st = require(idler_csv, "idler_csv")) return st;
  if (auto st = require(report_json, "report_json")) return st;
  return guarded([&] {
    const paircraft::RunConfig rc = paircraft::RunConfig::from_config(cfg->kv);
    const auto signal = paircraft::read_events_csv(signal_csv);
    const auto idler = paircraft::read_events_csv(idler_csv);
    if (signal.empty() || idler.empty())
      throw std::invalid_argument("analyze car: empty event stream");

    const std::int64_t window_ps =
        static_cast<std::int64_t>(std::llround(rc.source.window * 1e12));
    if (window_ps < 4 || window_ps % 4 != 0)
      throw std::invalid_argument(
          "analyze car: coincidence window must be a positive multiple of 4 ps");
    const std::int64_t bin_ps = window_ps / 4;
    const std::int64_t span_ps = 128 * window_ps;

    const paircraft::CoincidenceHistogram hist =
        paircraft::histogram_coincidences(signal, idler, bin_ps, span_ps);
    std::vector<std::int64_t> offsets;
    for (int k = 2; k <= 30; ++k) {
      offsets.push_back(k * window_ps);
      offsets.push_back(-k * window_ps);
    }
    const paircraft::WindowCounts wc =
        paircraft::window_counts(hist, window_ps, 0, offsets);

    if (histogram_csv) {
      std::vector<std::int64_t> delays(hist.counts.size());
      std::vector<double> counts(hist.counts.size());
      for (std::size_t i = 0; i < hist.counts.size(); ++i) {
        delays[i] = hist.bin_left_edge(i) + bin_ps / 2;
        counts[i] = static_cast<double>(hist.counts[i]);
      }
      paircraft::write_histogram_csv(histogram_csv, delays, counts);
    }

    const double t0 = static_cast<double>(
        std::min(signal.front().timestamp_ps, idler.front().timestamp_ps));
    const double t1 = static_cast<double>(
        std::max(signal.back().timestamp_ps, idler.back().timestamp_ps));
    const double duration = (t1 - t0) * 1e-12;
    if (!(duration > 0))
      throw std::invalid_argument("analyze car: zero-length event streams");

    const double n_s = static_cast<double>(signal.size()) / duration;
    const double n_i = static_cast<double>(idler.size()) / duration;
    const double c_rate = wc.coincidences / duration;
    const double a_rate = wc.accidentals / duration;

    json j;
    j["events"] = {{"signal", signal.size()}, {"idler", idler.size()}};
    j["duration_s"] = duration;
    j["window_ps"] = window_ps;
    j["coincidences"] = wc.coincidences;
    j["accidentals"] = wc.accidentals;
    j["car"] = paircraft::car(wc.coincidences, wc.accidentals);
    j["rates"] = {{"n_s", n_s}, {"n_i", n_i}, {"c_c", c_rate}, {"a_cc", a_rate}};
    try {
      const paircraft::RateInversion inv = paircraft::invert_rates(
          n_s, n_i, c_rate, a_rate, rc.source.dark_s, rc.source.dark_i,
          rc.source.noise_coeff_s * rc.power_mw * rc.source.eta_s_r,
          rc.source.noise_coeff_i * rc.power_mw * rc.source.eta_i_r);
      j["inversion"] = {{"pair_rate", inv.pair_rate},
                        {"eta_s", inv.eta_s},
                        {"eta_i", inv.eta_i}};
    } catch (const std::exception& e) {
      j["inversion"] = {{"error", e.what()}};
    }
    *report_json = dup_string(j.dump(2));
  });
}

paircraft_status paircraft_analyze_fringe(const char* xy_csv,
                                          double fixed_period,
                                          int bootstrap_resamples,
                                          unsigned long long seed,
                                          char** report_json) {
  if (auto st = require(xy_csv, "xy_csv")) return st;
  if (auto st = require(report_json, "report_json")) return st;
  return guarded([&] {
    const paircraft::XySeries data = paircraft::read_xy_csv_any(xy_csv);
    std::optional<double> fixed_k;
    if (fixed_period > 0) fixed_k = fixed_period;
    const paircraft::FringeFit fit = paircraft::fit_cosine(data.x, data.y, fixed_k);

    json j;
    j["n_points"] = data.x.size();
    j["c0"] = fit.c0;
    j["visibility"] = fit.visibility;
    j["phase0_rad"] = fit.phase0;
    j["period_k"] = fit.period_k;
    j["period_fixed"] = fit.period_fixed;
    j["chi2"] = fit.chi2;
    j["iterations"] = fit.iterations;
    if (bootstrap_resamples > 0) {
      const std::vector<double> sig = paircraft::bootstrap_sigma_cosine(
          data.x, data.y, fixed_k, bootstrap_resamples, seed);
      j["bootstrap_sigma"] = {{"c0", sig[0]},
                              {"visibility", sig[1]},
                              {"phase0_rad", sig[2]},
                              {"period_k", sig[3]}};
    } else {
      j["bootstrap_sigma"] = nullptr;
    }
    *report_json = dup_string(j.dump(2));
  });
}

paircraft_status paircraft_analyze_beating(const char* xy_csv,
                                           int bootstrap_resamples,
                                           unsigned long long seed,
                                           char** report_json) {
  if (auto st = require(xy_csv, "xy_csv")) return st;
  if (auto st = require(report_json, "report_json")) return st;
  return guarded([&] {
    const paircraft::XySeries data = paircraft::read_xy_csv_any(xy_csv);
    const paircraft::BeatingFit fit = paircraft::fit_beating(data.x, data.y);

    json j;
    j["n_points"] = data.x.size();
    j["c0"] = fit.c0;
    j["visibility"] = fit.visibility;
    j["omega_env_rad_s"] = fit.omega_env;
    j["delta_omega_rad_s"] = fit.delta_omega;
    j["phi_rad"] = fit.phi;
    j["tau0_s"] = fit.tau0;
    j["chi2"] = fit.chi2;
    j["iterations"] = fit.iterations;
    if (bootstrap_resamples > 0) {
      const std::vector<double> sig = paircraft::bootstrap_sigma_beating(
          data.x, data.y, bootstrap_resamples, seed);
      j["bootstrap_sigma"] = {{"c0", sig[0]},          {"visibility", sig[1]},
                              {"omega_env_rad_s", sig[2]}, {"delta_omega_rad_s", sig[3]},
                              {"phi_rad", sig[4]},     {"tau0_s", sig[5]}};
    } else {
      j["bootstrap_sigma"] = nullptr;
    }
    *report_json = dup_string(j.dump(2));
  });
}

/* ------------------------------------------------------------------ */

paircraft_status paircraft_tomo_timebin(const char* counts_path,
                                        char** report_json) {
  if (auto st = require(counts_path, "counts_path")) return st;
  if (auto st = require(report_json, "report_json")) return st;
  return guarded([&] {
    const std::string path(counts_path);
    const paircraft::ProjectionCountTable table =
        ends_with(path, ".json")
            ? paircraft::ProjectionCountTable::from_json(paircraft::load_json(path))
            : paircraft::ProjectionCountTable::from_csv(path);

    const paircraft::LinearReconstruction lin = paircraft::reconstruct_linear(table);
    const paircraft::DensityMatrix phys = paircraft::project_physical(lin.rho);
    const paircraft::PureState target = paircraft::bell_state("phi_plus");
    const double f_lin = paircraft::fidelity(lin.rho, target);
    const double f_phys = paircraft::fidelity(phys, target);

    json j;
    j["n_total"] = lin.n_total;
    j["condition"] = lin.condition;
    j["target"] = "phi_plus";
    j["fidelity"] = f_phys;
    j["linear"] = {{"matrix", matrix_json(lin.rho)},
                   {"min_eigenvalue", lin.rho.min_eigenvalue()},
                   {"fidelity", f_lin}};
    const Eigen::Vector4d eig = phys.eigenvalues();
    j["physical"] = {{"matrix", matrix_json(phys)},
                     {"eigenvalues", {eig[0], eig[1], eig[2], eig[3]}},
                     {"fidelity", f_phys}};
    *report_json = dup_string(j.dump(2));
  });
}

paircraft_status paircraft_tomo_freqbin(double a, double v, double phi,
                                        char** report_json) {
  if (auto st = require(report_json, "report_json")) return st;
  return guarded([&] {
    const paircraft::FreqBinParams p{a, v, phi};
    p.validate();
    const paircraft::DensityMatrix rho = paircraft::freqbin_density(p);
    const double f = paircraft::fidelity(rho, paircraft::bell_state("psi_swap_freq"));
    const paircraft::ChshResult chsh = paircraft::chsh_from_visibility(v);

    json j;
    j["a"] = a;
    j["v"] = v;
    j["phi_rad"] = phi;
    j["fidelity"] = f;
    j["closed_form"] = 0.5 * (1.0 + v * std::cos(phi));
    j["physical"] = p.physical();
    j["s_value"] = chsh.s_value;
    j["matrix"] = matrix_json(rho);
    *report_json = dup_string(j.dump(2));
  });
}

/* ------------------------------------------------------------------ */

paircraft_status paircraft_scan_fringe(const paircraft_config* cfg,
                                       int n_points, int single_photon,
                                       const char* out_csv) {
  if (auto st = require(cfg, "cfg")) return st;
  if (auto st = require(out_csv, "out_csv")) return st;
  return guarded([&] {
    if (n_points < 2) throw std::invalid_argument("scan fringe: need >= 2 points");
    const paircraft::RunConfig rc = paircraft::RunConfig::from_config(cfg->kv);
    const paircraft::SpectralState source = paircraft::SpectralState::build_cw(
        rc.omega_p0(), rc.grid_span(), rc.grid_points, rc.mu_c);
    paircraft::XySeries data;
    for (int i = 0; i < n_points; ++i) {
      const double phi = 2.0 * M_PI * i / n_points;
      paircraft::UmziConfig umzi = rc.umzi();
      umzi.phi_a = phi;
      data.x.push_back(phi);
      if (single_photon) {
        data.y.push_back(paircraft::single_photon_interference(rc.omega_s0(), umzi));
      } else {
        const paircraft::SpectralState fringe = paircraft::apply_umzi(
            source, umzi, paircraft::TemporalFilter::central_peak);
        data.y.push_back(paircraft::coincidence_same_port(
            fringe, rc.signal_filter(), rc.idler_filter(), rc.source.window,
            rc.source.eta_s, rc.source.eta_i));
      }
    }
    paircraft::write_xy_csv(out_csv, "phi_rad", "rate", data);
  });
}

paircraft_status paircraft_scan_beating(const paircraft_config* cfg,
                                        double tau_min_s, double tau_max_s,
                                        int n_points, const char* out_csv) {
  if (auto st = require(cfg, "cfg")) return st;
  if (auto st = require(out_csv, "out_csv")) return st;
  return guarded([&] {
    if (n_points < 2) throw std::invalid_argument("scan beating: need >= 2 points");
    if (!(tau_min_s < tau_max_s))
      throw std::invalid_argument("scan beating: need tau_min < tau_max");
    const paircraft::RunConfig rc = paircraft::RunConfig::from_config(cfg->kv);
    const paircraft::SpectralState source = paircraft::SpectralState::build_cw(
        rc.omega_p0(), rc.grid_span(), rc.grid_points, rc.mu_c);
    paircraft::UmziConfig umzi = rc.umzi();
    umzi.phi_a = paircraft::antibunched_phase(rc.omega_p0(), umzi.tau_ab);
    const paircraft::SpectralState anti = paircraft::apply_umzi(
        source, umzi, paircraft::TemporalFilter::central_peak);
    paircraft::XySeries data;
    for (int i = 0; i < n_points; ++i) {
      const double tau =
          tau_min_s + (tau_max_s - tau_min_s) * i / (n_points - 1);
      data.x.push_back(tau);
      data.y.push_back(paircraft::quantum_beating(
          anti, tau, rc.signal_filter(), rc.idler_filter(), M_SQRT1_2,
          rc.source.eta_s, rc.source.eta_i));
    }
    paircraft::write_xy_csv(out_csv, "delay_s", "rate", data);
  });
}

paircraft_status paircraft_scan_car(const paircraft_config* cfg,
                                    double power_min_mw, double power_max_mw,
                                    int n_points, const char* out_csv) {
  if (auto st = require(cfg, "cfg")) return st;
  if (auto st = require(out_csv, "out_csv")) return st;
  return guarded([&] {
    if (n_points < 2) throw std::invalid_argument("scan car: need >= 2 points");
    if (!(0 < power_min_mw && power_min_mw < power_max_mw))
      throw std::invalid_argument("scan car: need 0 < power_min < power_max");
    const paircraft::RunConfig rc = paircraft::RunConfig::from_config(cfg->kv);
    paircraft::XySeries data;
    for (int i = 0; i < n_points; ++i) {
      const double p = power_min_mw *
                       std::pow(power_max_mw / power_min_mw,
                                static_cast<double>(i) / (n_points - 1));
      const paircraft::CountPrediction pred = paircraft::predict_counts(rc.source, p);
      data.x.push_back(p);
      data.y.push_back(paircraft::car(pred.c_c, pred.a_cc));
    }
    paircraft::write_xy_csv(out_csv, "power_mw", "car", data);
  });
}

/* ------------------------------------------------------------------ */

paircraft_status paircraft_reproduce(unsigned long long seed, int* all_pass,
                                     char** report_text) {
  if (auto st = require(all_pass, "all_pass")) return st;
  return guarded([&] {
    const auto results = paircraft::run_acceptance_suite(seed);
    *all_pass = paircraft::all_passed(results) ? 1 : 0;
    if (report_text)
      *report_text = dup_string(paircraft::format_acceptance_report(results));
  });
}

}  // extern "C"

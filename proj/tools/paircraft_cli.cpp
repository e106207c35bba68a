// Command-line front end. Everything below talks to the shared library
// through the C API; exit codes are 0 (success), 1 (validation or analysis
// failure), 2 (usage).

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <paircraft.h>

namespace {

struct ConfigHandle {
  paircraft_config* cfg = nullptr;
  ~ConfigHandle() { paircraft_config_free(cfg); }
};

int fail_with_last_error() {
  std::fprintf(stderr, "error: %s\n", paircraft_last_error());
  return 1;
}

int print_and_free(char* text) {
  if (text) {
    std::fputs(text, stdout);
    if (text[0] != '\0' && text[std::strlen(text) - 1] != '\n') std::fputc('\n', stdout);
    paircraft_string_free(text);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulation and estimation toolkit for quantum-correlated photon pairs"};
  app.require_subcommand(1);
  app.fallthrough();  // accept --seed/--config/--set after the subcommand too

  std::vector<std::string> config_files;
  std::vector<std::string> overrides;
  unsigned long long seed_flag = 0;
  app.add_option("--config", config_files, "configuration file(s); later files win");
  app.add_option("--set", overrides, "override one configuration key (key=value)");
  auto* seed_opt =
      app.add_option("--seed", seed_flag,
                     "random seed (beats PAIRCRAFT_SEED and configuration files)");

  // simulate ------------------------------------------------------------
  auto* simulate = app.add_subcommand("simulate", "generate synthetic data");
  simulate->require_subcommand(1);

  auto* sim_cw = simulate->add_subcommand("cw", "monte-carlo time-tag streams");
  std::string sim_signal = "signal_events.csv", sim_idler = "idler_events.csv";
  std::string sim_power, sim_duration;
  sim_cw->add_option("--signal-out", sim_signal, "signal event CSV path");
  sim_cw->add_option("--idler-out", sim_idler, "idler event CSV path");
  sim_cw->add_option("--power", sim_power, "pump power (e.g. 0.273 mW)");
  sim_cw->add_option("--duration", sim_duration, "run length (e.g. 20 s)");

  auto* sim_tb = simulate->add_subcommand("timebin", "joint (port, slot) outcomes");
  std::string tb_state = "phi_plus", tb_out = "timebin_outcomes.json";
  double tb_alpha = 0.0, tb_beta = 0.0, tb_background = 0.0;
  unsigned long long tb_pairs = 100000;
  sim_tb->add_option("--state", tb_state,
                     "named pure state or density-matrix JSON path");
  sim_tb->add_option("--alpha", tb_alpha, "analyzer phase, signal side (rad)");
  sim_tb->add_option("--beta", tb_beta, "analyzer phase, idler side (rad)");
  sim_tb->add_option("--pairs", tb_pairs, "number of generated pairs");
  sim_tb->add_option("--background", tb_background, "background counts per pair");
  sim_tb->add_option("--out", tb_out, "outcome table JSON path");

  // analyze -------------------------------------------------------------
  auto* analyze = app.add_subcommand("analyze", "fit and summarize measured data");
  analyze->require_subcommand(1);

  auto* an_car = analyze->add_subcommand("car", "coincidence histogram and CAR");
  std::string car_signal, car_idler, car_hist;
  an_car->add_option("--signal", car_signal, "signal event CSV")->required();
  an_car->add_option("--idler", car_idler, "idler event CSV")->required();
  an_car->add_option("--histogram", car_hist, "write the delay histogram CSV here");

  std::string fr_in;
  double fr_period = 0.0;
  int fr_bootstrap = 0;
  auto add_fringe_options = [&](CLI::App* sub) {
    sub->add_option("--in", fr_in, "two-column CSV (x, counts)")->required();
    sub->add_option("--period", fr_period,
                    "fix the angular frequency (default: fitted)");
    sub->add_option("--bootstrap", fr_bootstrap, "bootstrap resamples (0 = skip)");
  };
  auto* an_fringe = analyze->add_subcommand("fringe", "cosine fringe fit");
  add_fringe_options(an_fringe);
  auto* an_franson =
      analyze->add_subcommand("franson", "cosine fringe fit of a two-photon scan");
  add_fringe_options(an_franson);

  auto* an_beat = analyze->add_subcommand("beating", "sinc-envelope beating fit");
  std::string beat_in;
  int beat_bootstrap = 0;
  an_beat->add_option("--in", beat_in, "two-column CSV (delay s, counts)")->required();
  an_beat->add_option("--bootstrap", beat_bootstrap, "bootstrap resamples (0 = skip)");

  // tomo ----------------------------------------------------------------
  auto* tomo = app.add_subcommand("tomo", "density-matrix reconstruction");
  tomo->require_subcommand(1);

  auto* tomo_tb = tomo->add_subcommand("timebin", "from a projection count table");
  std::string tomo_counts;
  tomo_tb->add_option("--counts", tomo_counts, "16-row count table (CSV or JSON)")
      ->required();

  auto* tomo_fb = tomo->add_subcommand("freqbin", "closed-form two-order state");
  double fb_a = 0.502, fb_v = 0.9685, fb_phi = 0.182;
  tomo_fb->add_option("--a", fb_a, "population of the leading frequency order");
  tomo_fb->add_option("--v", fb_v, "coherence magnitude");
  tomo_fb->add_option("--phi", fb_phi, "coherence phase (rad)");

  // scan ----------------------------------------------------------------
  auto* scan = app.add_subcommand("scan", "model curves for figures");
  scan->require_subcommand(1);

  auto* scan_fringe = scan->add_subcommand("fringe", "rate vs interferometer phase");
  std::string scf_out;
  int scf_points = 96;
  bool scf_single = false;
  scan_fringe->add_option("--out", scf_out, "output CSV")->required();
  scan_fringe->add_option("--points", scf_points, "samples over one 2*pi period");
  scan_fringe->add_flag("--single", scf_single, "single-photon fringe instead of pairs");

  auto* scan_beat = scan->add_subcommand("beating", "rate vs recombination delay");
  std::string scb_out;
  double scb_min_ps = -30.0, scb_max_ps = 30.0;
  int scb_points = 241;
  scan_beat->add_option("--out", scb_out, "output CSV")->required();
  scan_beat->add_option("--min-ps", scb_min_ps, "first delay (ps)");
  scan_beat->add_option("--max-ps", scb_max_ps, "last delay (ps)");
  scan_beat->add_option("--points", scb_points, "number of samples");

  auto* scan_car = scan->add_subcommand("car", "analytic CAR vs pump power");
  std::string scc_out;
  double scc_min = 0.01, scc_max = 10.0;
  int scc_points = 60;
  scan_car->add_option("--out", scc_out, "output CSV")->required();
  scan_car->add_option("--min", scc_min, "lowest power (mW)");
  scan_car->add_option("--max", scc_max, "highest power (mW)");
  scan_car->add_option("--points", scc_points, "number of samples (log-spaced)");

  // reproduce -----------------------------------------------------------
  auto* reproduce =
      app.add_subcommand("reproduce", "verification against bundled reference data");
  reproduce->require_subcommand(1);
  auto* reproduce_paper = reproduce->add_subcommand(
      "paper", "run every bundled verification check and print the table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const char* env_seed = std::getenv("PAIRCRAFT_SEED");
  const unsigned long long suite_seed =
      seed_opt->count() ? seed_flag
                        : (env_seed ? std::strtoull(env_seed, nullptr, 10) : 20260822ull);

  // Assemble the configuration: files, then --set overrides, then the seed
  // chain (--seed beats PAIRCRAFT_SEED beats files beats defaults).
  ConfigHandle handle;
  if (paircraft_config_create(&handle.cfg) != PAIRCRAFT_OK) return fail_with_last_error();
  for (const std::string& path : config_files)
    if (paircraft_config_load(handle.cfg, path.c_str()) != PAIRCRAFT_OK)
      return fail_with_last_error();
  for (const std::string& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::fprintf(stderr, "error: --set expects key=value, got '%s'\n", kv.c_str());
      return 2;
    }
    if (paircraft_config_set(handle.cfg, kv.substr(0, eq).c_str(),
                             kv.substr(eq + 1).c_str()) != PAIRCRAFT_OK)
      return fail_with_last_error();
  }
  if (env_seed)
    if (paircraft_config_set(handle.cfg, "seed", env_seed) != PAIRCRAFT_OK)
      return fail_with_last_error();
  if (seed_opt->count())
    if (paircraft_config_set(handle.cfg, "seed",
                             std::to_string(seed_flag).c_str()) != PAIRCRAFT_OK)
      return fail_with_last_error();

  char* text = nullptr;

  if (sim_cw->parsed()) {
    if (!sim_power.empty() &&
        paircraft_config_set(handle.cfg, "power", sim_power.c_str()) != PAIRCRAFT_OK)
      return fail_with_last_error();
    if (!sim_duration.empty() &&
        paircraft_config_set(handle.cfg, "duration", sim_duration.c_str()) != PAIRCRAFT_OK)
      return fail_with_last_error();
    if (paircraft_simulate_cw(handle.cfg, sim_signal.c_str(), sim_idler.c_str(),
                              &text) != PAIRCRAFT_OK)
      return fail_with_last_error();
    return print_and_free(text);
  }

  if (sim_tb->parsed()) {
    if (paircraft_simulate_timebin(handle.cfg, tb_state.c_str(), tb_alpha, tb_beta,
                                   tb_pairs, tb_background, tb_out.c_str(),
                                   &text) != PAIRCRAFT_OK)
      return fail_with_last_error();
    return print_and_free(text);
  }

  if (an_car->parsed()) {
    if (paircraft_analyze_car(handle.cfg, car_signal.c_str(), car_idler.c_str(),
                              car_hist.empty() ? nullptr : car_hist.c_str(),
                              &text) != PAIRCRAFT_OK)
      return fail_with_last_error();
    return print_and_free(text);
  }

  if (an_fringe->parsed() || an_franson->parsed()) {
    if (paircraft_analyze_fringe(fr_in.c_str(), fr_period, fr_bootstrap, suite_seed,
                                 &text) != PAIRCRAFT_OK)
      return fail_with_last_error();
    return print_and_free(text);
  }

  if (an_beat->parsed()) {
    if (paircraft_analyze_beating(beat_in.c_str(), beat_bootstrap, suite_seed,
                                  &text) != PAIRCRAFT_OK)
      return fail_with_last_error();
    return print_and_free(text);
  }

  if (tomo_tb->parsed()) {
    if (paircraft_tomo_timebin(tomo_counts.c_str(), &text) != PAIRCRAFT_OK)
      return fail_with_last_error();
    return print_and_free(text);
  }

  if (tomo_fb->parsed()) {
    if (paircraft_tomo_freqbin(fb_a, fb_v, fb_phi, &text) != PAIRCRAFT_OK)
      return fail_with_last_error();
    return print_and_free(text);
  }

  if (scan_fringe->parsed()) {
    if (paircraft_scan_fringe(handle.cfg, scf_points, scf_single ? 1 : 0,
                              scf_out.c_str()) != PAIRCRAFT_OK)
      return fail_with_last_error();
    return 0;
  }

  if (scan_beat->parsed()) {
    if (paircraft_scan_beating(handle.cfg, scb_min_ps * 1e-12, scb_max_ps * 1e-12,
                               scb_points, scb_out.c_str()) != PAIRCRAFT_OK)
      return fail_with_last_error();
    return 0;
  }

  if (scan_car->parsed()) {
    if (paircraft_scan_car(handle.cfg, scc_min, scc_max, scc_points,
                           scc_out.c_str()) != PAIRCRAFT_OK)
      return fail_with_last_error();
    return 0;
  }

  if (reproduce_paper->parsed()) {
    int all_pass = 0;
    if (paircraft_reproduce(suite_seed, &all_pass, &text) != PAIRCRAFT_OK)
      return fail_with_last_error();
    print_and_free(text);
    return all_pass ? 0 : 1;
  }

  std::fprintf(stderr, "error: no subcommand\n");
  return 2;
}

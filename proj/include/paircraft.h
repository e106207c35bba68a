#ifndef PAIRCRAFT_H
#define PAIRCRAFT_H

/* C interface to the photon-pair simulation and estimation toolkit. All
 * entry points are thread-safe; the last error message is thread-local.
 * Strings returned through char** out-parameters are heap-allocated and
 * must be released with paircraft_string_free. */

#ifdef __cplusplus
extern "C" {
#endif

typedef enum paircraft_status {
  PAIRCRAFT_OK = 0,
  PAIRCRAFT_ERR_NULL_POINTER = 1,   /* required pointer argument was NULL */
  PAIRCRAFT_ERR_INVALID_ARGUMENT = 2, /* bad value, config, or file content */
  PAIRCRAFT_ERR_DOMAIN = 3,         /* arithmetic outside the model's domain */
  PAIRCRAFT_ERR_RUNTIME = 4         /* I/O failure or non-convergence */
} paircraft_status;

/* Library version string, static storage. */
const char* paircraft_version(void);

/* Message for the most recent failure on this thread, static until the next
 * call that fails. Empty string if nothing failed yet. */
const char* paircraft_last_error(void);

void paircraft_string_free(char* s);

/* ------------------------------------------------------------------ */
/* Configuration handle: flat key = value settings with unit suffixes
 * (ps, ns, nm, GHz, mW ...) layered over the reference operating point.
 * Values are validated when the configuration is used, not when set;
 * paircraft_config_describe forces a full validation pass. */

typedef struct paircraft_config paircraft_config;

paircraft_status paircraft_config_create(paircraft_config** out);
/* Merge `key = value` lines from a file into cfg (later wins). */
paircraft_status paircraft_config_load(paircraft_config* cfg, const char* path);
paircraft_status paircraft_config_set(paircraft_config* cfg, const char* key,
                                      const char* value);
/* Resolved configuration as a JSON object; fails with the full list of
 * problems when any setting is invalid. */
paircraft_status paircraft_config_describe(const paircraft_config* cfg,
                                           char** json_out);
void paircraft_config_free(paircraft_config* cfg);

/* ------------------------------------------------------------------ */
/* Simulation */

/* Monte-Carlo CW run at the configured power/duration/seed. Writes the two
 * event streams as `channel,timestamp_ps` CSVs; summary_json (optional)
 * receives event counts and the effective parameters. */
paircraft_status paircraft_simulate_cw(const paircraft_config* cfg,
                                       const char* signal_csv,
                                       const char* idler_csv,
                                       char** summary_json);

/* Joint (port, slot) outcome sampling for a two-photon time-slot state.
 * `state` is a named pure state (phi_plus, phi_minus, psi_plus, psi_minus)
 * or a path to a density-matrix JSON file. Writes the outcome table as
 * JSON; summary_json (optional) receives totals. */
paircraft_status paircraft_simulate_timebin(const paircraft_config* cfg,
                                            const char* state,
                                            double alpha, double beta,
                                            unsigned long long n_pairs,
                                            double background_rate,
                                            const char* out_json,
                                            char** summary_json);

/* ------------------------------------------------------------------ */
/* Analysis */

/* Delay histogram, windowed coincidence/accidental counts, CAR, and the
 * rate inversion under the configured model. histogram_csv may be NULL. */
paircraft_status paircraft_analyze_car(const paircraft_config* cfg,
                                       const char* signal_csv,
                                       const char* idler_csv,
                                       const char* histogram_csv,
                                       char** report_json);

/* Cosine fringe fit of a two-column CSV (any numeric x). fixed_period <= 0
 * leaves the angular frequency free. bootstrap_resamples = 0 skips the
 * uncertainty pass. */
paircraft_status paircraft_analyze_fringe(const char* xy_csv,
                                          double fixed_period,
                                          int bootstrap_resamples,
                                          unsigned long long seed,
                                          char** report_json);

/* Beating-envelope fit (sinc-modulated cosine) of a two-column CSV with
 * time in seconds. */
paircraft_status paircraft_analyze_beating(const char* xy_csv,
                                           int bootstrap_resamples,
                                           unsigned long long seed,
                                           char** report_json);

/* ------------------------------------------------------------------ */
/* Tomography */

/* Reconstruct a density matrix from a 16-row projection count table
 * (CSV or JSON, detected by extension). The report carries the linear
 * inversion, the physical projection, and fidelity to phi_plus. */
paircraft_status paircraft_tomo_timebin(const char* counts_path,
                                        char** report_json);

/* Closed-form two-frequency-order state: density matrix, fidelity to the
 * swapped-order superposition, and the implied S value. */
paircraft_status paircraft_tomo_freqbin(double a, double v, double phi,
                                        char** report_json);

/* ------------------------------------------------------------------ */
/* Model scans (figure data) */

/* Coincidence fringe (or the single-photon fringe when single_photon is
 * nonzero) versus interferometer phase over one 2*pi period. */
paircraft_status paircraft_scan_fringe(const paircraft_config* cfg,
                                       int n_points, int single_photon,
                                       const char* out_csv);

/* Cross-port coincidence rate versus relative delay after recombining the
 * anti-bunched pair state. */
paircraft_status paircraft_scan_beating(const paircraft_config* cfg,
                                        double tau_min_s, double tau_max_s,
                                        int n_points, const char* out_csv);

/* Analytic coincidence-to-accidental ratio versus pump power (log-spaced)
 * for the configured source model. */
paircraft_status paircraft_scan_car(const paircraft_config* cfg,
                                    double power_min_mw, double power_max_mw,
                                    int n_points, const char* out_csv);

/* ------------------------------------------------------------------ */
/* Release gate */

/* Run the bundled verification suite; report_text (optional) receives the
 * pass/fail table, all_pass is 1 when every check passed. */
paircraft_status paircraft_reproduce(unsigned long long seed, int* all_pass,
                                     char** report_text);

#ifdef __cplusplus
}
#endif

#endif /* PAIRCRAFT_H */

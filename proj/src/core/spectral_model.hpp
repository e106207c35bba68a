#pragma once

#include <Eigen/Dense>
#include <initializer_list>
#include <map>
#include <utility>

namespace paircraft {

// Spatial path labels a photon can occupy while propagating through the
// interferometer chain: source -> (a,b) inside the UMZI -> (c,d) at its
// outputs -> (e,f) after the recombining beam splitter.
enum class Port : int { source, a, b, c, d, e, f };
const char* port_name(Port p);

using PathPair = std::pair<Port, Port>;  // (signal path, idler path)

// Two-photon spectral amplitude on a 1-D signal-frequency grid. The pump is
// treated as an ideal CW delta-correlation, so the idler frequency is slaved
// to the signal: omega_idler = 2*omega_p0 - omega_signal. Amplitudes are
// stored per path-pair label; evolutions are unitary on the label space and
// return new states (instances are immutable).
class SpectralState {
 public:
  // Flat amplitude sqrt(mu_c * cell_width) per cell on the (source, source)
  // label, so norm_squared() == mu_c * span.
  static SpectralState build_cw(double omega_p0, double span, int n_cells, double mu_c);

  int n_cells() const { return n_cells_; }
  double cell_width() const { return span_ / n_cells_; }
  double span() const { return span_; }
  double omega_p0() const { return omega_p0_; }
  double mu_c() const { return mu_c_; }
  double omega(int j) const;        // signal frequency at cell centre j
  double omega_conj(int j) const;   // slaved idler frequency at cell j

  double norm_squared() const;
  // Squared norm of one path-pair component (0 if the label is absent).
  double pair_weight(Port signal, Port idler) const;

  // Both photons pass through the same physical element, so each label map
  // applies to signal and idler alike: in_a -> r*out_a + t*out_b,
  // in_b -> t*out_a - r*out_b with t = sqrt(1 - r^2).
  SpectralState beam_split(Port in_a, Port in_b, Port out_a, Port out_b, double r) const;

  // Photons on `port` acquire exp(-i(omega*tau + phase)) at their own
  // frequency (signal cells use omega, idler cells the slaved conjugate).
  SpectralState delay(Port port, double tau, double phase = 0.0) const;

  // Projective selection of a subset of path pairs (drops the rest; norm
  // decreases accordingly).
  SpectralState keep(std::initializer_list<PathPair> pairs) const;

  const std::map<PathPair, Eigen::VectorXcd>& amplitudes() const { return amps_; }

 private:
  SpectralState() = default;
  double omega_p0_ = 0.0;
  double span_ = 0.0;
  int n_cells_ = 0;
  double mu_c_ = 0.0;
  std::map<PathPair, Eigen::VectorXcd> amps_;
};

struct UmziConfig {
  double tau_ab = 0.0;               // arm delay difference, s
  double phi_a = 0.0;                // additional phase in the long arm, rad
  double split_ratio = 0.7071067811865476;  // amplitude ratio of both couplers
  void validate() const;             // tau_ab >= 0, 0 < split_ratio < 1
};

enum class TemporalFilter { central_peak, none };

// source -> first coupler -> long-arm delay (tau_ab, phi_a) -> second
// coupler -> ports c, d. With TemporalFilter::central_peak only the
// both-short/both-long pair component survives. Long-arm propagation phases
// are kept exactly, so the pair fringe sits at 2*omega_p0*tau_ab + 2*phi_a.
SpectralState apply_umzi(const SpectralState& state, const UmziConfig& cfg,
                         TemporalFilter filter);

struct FilterSpec {
  double center = 0.0;     // rad/s
  double bandwidth = 0.0;  // full rectangular width, rad/s
  void validate() const;
};

// Filtered two-detector coincidence rate with label-free detector semantics
// (either photon may satisfy either detector). Flat integrands integrate
// exactly at any grid resolution; the rate carries the mu_c scale of the
// state so a full-band balanced fringe peaks at eta_s*eta_i*mu_c/4.
// `window` is the coincidence window of the counting electronics; it must
// satisfy window * min_bandwidth >= 20*pi or the underlying separability
// assumption breaks down (error).
double coincidence_rate(const SpectralState& state, Port port_a,
                        const FilterSpec& filter_a, Port port_b,
                        const FilterSpec& filter_b, double window,
                        double eta_a = 1.0, double eta_b = 1.0);

// Both detectors on output c of the UMZI (signal and idler filters), and the
// c/d split, respectively.
double coincidence_same_port(const SpectralState& state, const FilterSpec& filter_s,
                             const FilterSpec& filter_i, double window,
                             double eta_s = 1.0, double eta_i = 1.0);
double coincidence_cross_port(const SpectralState& state, const FilterSpec& filter_s,
                              const FilterSpec& filter_i, double window,
                              double eta_s = 1.0, double eta_i = 1.0);

// Detection probability at port c for a single photon of frequency omega sent
// through the interferometer: |r^2 e^{-i(omega tau_ab + phi_a)} + t^2|^2.
// Fringe period is 2*pi in phi_a — twice the pair-coincidence period.
double single_photon_interference(double omega, const UmziConfig& cfg);

// Takes the anti-bunched (c,d)+(d,c) state, delays port c by tau, recombines
// c and d on a beam splitter of amplitude ratio bs_ratio and returns the
// cross-port coincidence rate behind the two filters. Errors if the input
// carries measurable same-port weight.
double quantum_beating(const SpectralState& antibunched, double tau,
                       const FilterSpec& filter_a, const FilterSpec& filter_b,
                       double bs_ratio = 0.7071067811865476,
                       double eta_a = 1.0, double eta_b = 1.0);

// phi_a values that make the central-peak component purely anti-bunched
// (resp. bunched) for a given arm delay, compensating the carrier phase
// 2*omega_p0*tau_ab.
double antibunched_phase(double omega_p0, double tau_ab);
double bunched_phase(double omega_p0, double tau_ab);

}  // namespace paircraft

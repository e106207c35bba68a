#include "core/spectral_model.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

namespace paircraft {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

}  // namespace

const char* port_name(Port p) {
  switch (p) {
    case Port::source: return "source";
    case Port::a: return "a";
    case Port::b: return "b";
    case Port::c: return "c";
    case Port::d: return "d";
    case Port::e: return "e";
    case Port::f: return "f";
  }
  return "?";
}

SpectralState SpectralState::build_cw(double omega_p0, double span, int n_cells,
                                      double mu_c) {
  if (!(omega_p0 > 0.0)) throw std::invalid_argument("build_cw: omega_p0 must be positive");
  if (!(span > 0.0)) throw std::invalid_argument("build_cw: span must be positive");
  if (n_cells < 64) throw std::invalid_argument("build_cw: need at least 64 grid cells");
  if (!(mu_c > 0.0)) throw std::invalid_argument("build_cw: mu_c must be positive");
  SpectralState s;
  s.omega_p0_ = omega_p0;
  s.span_ = span;
  s.n_cells_ = n_cells;
  s.mu_c_ = mu_c;
  double amp = std::sqrt(mu_c * span / n_cells);
  s.amps_[{Port::source, Port::source}] =
      Eigen::VectorXcd::Constant(n_cells, std::complex<double>(amp, 0.0));
  return s;
}

double SpectralState::omega(int j) const {
  return omega_p0_ - span_ / 2.0 + (j + 0.5) * cell_width();
}

double SpectralState::omega_conj(int j) const { return 2.0 * omega_p0_ - omega(j); }

double SpectralState::norm_squared() const {
  double s = 0.0;
  for (const auto& [key, v] : amps_) s += v.squaredNorm();
  return s;
}

double SpectralState::pair_weight(Port signal, Port idler) const {
  auto it = amps_.find({signal, idler});
  return it == amps_.end() ? 0.0 : it->second.squaredNorm();
}

SpectralState SpectralState::beam_split(Port in_a, Port in_b, Port out_a,
                                        Port out_b, double r) const {
  if (!(r > 0.0 && r < 1.0))
    throw std::invalid_argument("beam_split: amplitude ratio must be in (0, 1)");
  double t = std::sqrt(1.0 - r * r);
  auto map_port = [&](Port p) {
    // rows: (coefficient on out_a, coefficient on out_b)
    if (p == in_a) return std::array<std::pair<Port, double>, 2>{{{out_a, r}, {out_b, t}}};
    if (p == in_b) return std::array<std::pair<Port, double>, 2>{{{out_a, t}, {out_b, -r}}};
    return std::array<std::pair<Port, double>, 2>{{{p, 1.0}, {p, 0.0}}};
  };
  SpectralState out = *this;
  out.amps_.clear();
  for (const auto& [key, v] : amps_) {
    for (const auto& [ps, cs] : map_port(key.first)) {
      if (cs == 0.0) continue;
      for (const auto& [pi, ci] : map_port(key.second)) {
        if (ci == 0.0) continue;
        auto& dst = out.amps_[{ps, pi}];
        if (dst.size() == 0) dst = Eigen::VectorXcd::Zero(n_cells_);
        dst += (cs * ci) * v;
      }
    }
  }
  return out;
}

SpectralState SpectralState::delay(Port port, double tau, double phase) const {
  Eigen::VectorXcd ph_s(n_cells_), ph_i(n_cells_);
  for (int j = 0; j < n_cells_; ++j) {
    ph_s(j) = std::exp(-kI * (omega(j) * tau + phase));
    ph_i(j) = std::exp(-kI * (omega_conj(j) * tau + phase));
  }
  SpectralState out = *this;
  for (auto& [key, v] : out.amps_) {
    if (key.first == port) v = v.cwiseProduct(ph_s);
    if (key.second == port) v = v.cwiseProduct(ph_i);
  }
  return out;
}

SpectralState SpectralState::keep(std::initializer_list<PathPair> pairs) const {
  SpectralState out = *this;
  out.amps_.clear();
  for (const PathPair& p : pairs) {
    auto it = amps_.find(p);
    if (it != amps_.end()) out.amps_[p] = it->second;
  }
  return out;
}

void UmziConfig::validate() const {
  if (tau_ab < 0.0) throw std::invalid_argument("UmziConfig: tau_ab must be >= 0");
  if (!(split_ratio > 0.0 && split_ratio < 1.0))
    throw std::invalid_argument("UmziConfig: split_ratio must be in (0, 1)");
}

SpectralState apply_umzi(const SpectralState& state, const UmziConfig& cfg,
                         TemporalFilter filter) {
  cfg.validate();
  if (state.pair_weight(Port::source, Port::source) <= 0.0)
    throw std::invalid_argument("apply_umzi: state carries no source-path amplitude");
  SpectralState s = state.beam_split(Port::source, Port::a, Port::a, Port::b,
                                     cfg.split_ratio);
  s = s.delay(Port::a, cfg.tau_ab, cfg.phi_a);
  if (filter == TemporalFilter::central_peak)
    s = s.keep({{Port::a, Port::a}, {Port::b, Port::b}});
  return s.beam_split(Port::a, Port::b, Port::c, Port::d, cfg.split_ratio);
}

void FilterSpec::validate() const {
  if (!(bandwidth > 0.0)) throw std::invalid_argument("FilterSpec: bandwidth must be positive");
  if (!(center > 0.0)) throw std::invalid_argument("FilterSpec: center must be positive");
}

namespace {

// Fractional overlap of each grid cell with the filter band.
Eigen::VectorXd band_fractions(const SpectralState& st, const FilterSpec& f, bool conjugate) {
  double lo = f.center - f.bandwidth / 2.0;
  double hi = f.center + f.bandwidth / 2.0;
  double dw = st.cell_width();
  Eigen::VectorXd g(st.n_cells());
  for (int j = 0; j < st.n_cells(); ++j) {
    double w = conjugate ? st.omega_conj(j) : st.omega(j);
    g(j) = clamp01((std::min(hi, w + dw / 2.0) - std::max(lo, w - dw / 2.0)) / dw);
  }
  return g;
}

void check_grid_covers(const SpectralState& st, const FilterSpec& f) {
  double grid_lo = st.omega_p0() - st.span() / 2.0;
  double grid_hi = st.omega_p0() + st.span() / 2.0;
  double lo = f.center - f.bandwidth / 2.0;
  double hi = f.center + f.bandwidth / 2.0;
  // The slaved idler axis mirrors the grid about omega_p0, so covering the
  // band directly also covers its conjugate image.
  double mlo = 2.0 * st.omega_p0() - hi;
  double mhi = 2.0 * st.omega_p0() - lo;
  if (lo < grid_lo || hi > grid_hi || mlo < grid_lo || mhi > grid_hi) {
    std::ostringstream msg;
    msg << "filter band [" << lo << ", " << hi
        << "] rad/s is not covered by the grid [" << grid_lo << ", " << grid_hi << "]";
    throw std::invalid_argument(msg.str());
  }
}

void check_window(const FilterSpec& fa, const FilterSpec& fb, double window) {
  double min_bw = std::min(fa.bandwidth, fb.bandwidth);
  if (!(window > 0.0)) throw std::invalid_argument("coincidence window must be positive");
  if (window * min_bw < 20.0 * M_PI) {
    std::ostringstream msg;
    msg << "coincidence window " << window << " s resolves the filter bandwidth "
        << min_bw << " rad/s (need window*bandwidth >= 20*pi); the separable "
        << "counting model does not apply";
    throw std::invalid_argument(msg.str());
  }
}

double filtered_rate(const SpectralState& state, Port port_a, const FilterSpec& fa,
                     Port port_b, const FilterSpec& fb, double eta_a, double eta_b) {
  fa.validate();
  fb.validate();
  if (!(eta_a >= 0.0 && eta_a <= 1.0 && eta_b >= 0.0 && eta_b <= 1.0))
    throw std::invalid_argument("detection efficiencies must be in [0, 1]");
  check_grid_covers(state, fa);
  check_grid_covers(state, fb);
  // Label-free detectors: the signal photon may satisfy detector A with the
  // idler at B, or vice versa. g1/g2 are the per-cell acceptance products for
  // the two assignments; their summed support is the normalization measure
  // that turns the squared amplitudes back into a spectral-density rate.
  Eigen::VectorXd g1 = band_fractions(state, fa, false).cwiseProduct(band_fractions(state, fb, true));
  Eigen::VectorXd g2 = band_fractions(state, fb, false).cwiseProduct(band_fractions(state, fa, true));
  double measure = (g1.sum() + g2.sum()) * state.cell_width();
  if (measure <= 0.0) {
    std::ostringstream msg;
    msg << "filters at " << fa.center << " and " << fb.center
        << " rad/s accept no energy-matched pair on this grid";
    throw std::invalid_argument(msg.str());
  }
  double num = 0.0;
  for (const auto& [key, v] : state.amplitudes()) {
    Eigen::VectorXd a2 = v.cwiseAbs2();
    if (key.first == port_a && key.second == port_b) num += a2.dot(g1);
    if (key.first == port_b && key.second == port_a) num += a2.dot(g2);
  }
  return eta_a * eta_b * num / measure;
}

}  // namespace

double coincidence_rate(const SpectralState& state, Port port_a, const FilterSpec& fa,
                        Port port_b, const FilterSpec& fb, double window,
                        double eta_a, double eta_b) {
  fa.validate();
  fb.validate();
  check_window(fa, fb, window);
  return filtered_rate(state, port_a, fa, port_b, fb, eta_a, eta_b);
}

double coincidence_same_port(const SpectralState& state, const FilterSpec& fs,
                             const FilterSpec& fi, double window,
                             double eta_s, double eta_i) {
  return coincidence_rate(state, Port::c, fs, Port::c, fi, window, eta_s, eta_i);
}

double coincidence_cross_port(const SpectralState& state, const FilterSpec& fs,
                              const FilterSpec& fi, double window,
                              double eta_s, double eta_i) {
  return coincidence_rate(state, Port::c, fs, Port::d, fi, window, eta_s, eta_i);
}

double single_photon_interference(double omega, const UmziConfig& cfg) {
  cfg.validate();
  double r2 = cfg.split_ratio * cfg.split_ratio;
  double t2 = 1.0 - r2;
  std::complex<double> amp =
      r2 * std::exp(-kI * (omega * cfg.tau_ab + cfg.phi_a)) + t2;
  return std::norm(amp);
}

double quantum_beating(const SpectralState& antibunched, double tau,
                       const FilterSpec& fa, const FilterSpec& fb,
                       double bs_ratio, double eta_a, double eta_b) {
  double cross = antibunched.pair_weight(Port::c, Port::d) +
                 antibunched.pair_weight(Port::d, Port::c);
  double same = antibunched.pair_weight(Port::c, Port::c) +
                antibunched.pair_weight(Port::d, Port::d);
  if (cross <= 0.0)
    throw std::invalid_argument("quantum_beating: state has no c/d cross-port component");
  if (same > 1e-6 * (same + cross)) {
    std::ostringstream msg;
    msg << "quantum_beating: input is not anti-bunched (same-port weight fraction "
        << same / (same + cross) << ")";
    throw std::invalid_argument(msg.str());
  }
  SpectralState s = antibunched.delay(Port::c, tau);
  s = s.beam_split(Port::c, Port::d, Port::e, Port::f, bs_ratio);
  return filtered_rate(s, Port::e, fa, Port::f, fb, eta_a, eta_b);
}

double antibunched_phase(double omega_p0, double tau_ab) {
  double carrier = std::fmod(2.0 * omega_p0 * tau_ab, 2.0 * M_PI);
  double target = M_PI - carrier;  // want carrier + 2*phi_a = pi (mod 2pi)
  target = std::fmod(target + 4.0 * M_PI, 2.0 * M_PI);
  return 0.5 * target;
}

double bunched_phase(double omega_p0, double tau_ab) {
  double carrier = std::fmod(2.0 * omega_p0 * tau_ab, 2.0 * M_PI);
  double target = std::fmod(2.0 * M_PI - carrier + 4.0 * M_PI, 2.0 * M_PI);
  return 0.5 * target;
}

}  // namespace paircraft

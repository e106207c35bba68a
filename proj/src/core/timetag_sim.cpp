#include "core/timetag_sim.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

#include "core/rng.hpp"

namespace paircraft {

void DetectorModel::validate() const {
  if (!(efficiency >= 0.0 && efficiency <= 1.0))
    throw std::invalid_argument("DetectorModel: efficiency must be in [0, 1]");
  if (dark_rate < 0.0) throw std::invalid_argument("DetectorModel: dark_rate must be >= 0");
  if (jitter_sigma < 0.0) throw std::invalid_argument("DetectorModel: jitter_sigma must be >= 0");
  if (dead_time < 0.0) throw std::invalid_argument("DetectorModel: dead_time must be >= 0");
}

namespace {

constexpr double kPsPerSecond = 1e12;

void append_poisson_train(std::vector<double>& out, Rng& rng, double rate,
                          double duration) {
  if (rate <= 0.0) return;
  double t = rng.exponential(rate);
  while (t < duration) {
    out.push_back(t);
    t += rng.exponential(rate);
  }
}

// Thin by probability p, add Gaussian jitter, convert to integer picoseconds.
void detect_photons(std::vector<std::int64_t>& out, Rng& rng,
                    const std::vector<double>& emission_times, double p,
                    double jitter_sigma, double duration) {
  for (double t : emission_times) {
    if (p < 1.0 && rng.uniform() >= p) continue;
    double td = t;
    if (jitter_sigma > 0.0) td += jitter_sigma * rng.gaussian();
    if (td < 0.0 || td >= duration) continue;
    out.push_back(static_cast<std::int64_t>(std::llround(td * kPsPerSecond)));
  }
}

std::vector<TimeTagEvent> finalize_channel(std::vector<std::int64_t>& stamps,
                                           int channel, double dead_time) {
  std::sort(stamps.begin(), stamps.end());
  const std::int64_t dead_ps =
      static_cast<std::int64_t>(std::llround(dead_time * kPsPerSecond));
  std::vector<TimeTagEvent> out;
  out.reserve(stamps.size());
  std::int64_t last = std::numeric_limits<std::int64_t>::min();
  for (std::int64_t ts : stamps) {
    if (last != std::numeric_limits<std::int64_t>::min() && ts - last < dead_ps) continue;
    out.push_back({channel, ts});
    last = ts;
  }
  return out;
}

}  // namespace

SimulatedStreams simulate_cw(const SourceModel& model, const DetectorModel& det_s,
                             const DetectorModel& det_i, double power_mw,
                             double duration_s, std::uint64_t seed) {
  model.validate();
  det_s.validate();
  det_i.validate();
  if (power_mw < 0.0) throw std::invalid_argument("simulate_cw: power must be >= 0");
  if (!(duration_s > 0.0)) throw std::invalid_argument("simulate_cw: duration must be > 0");

  Rng master(seed);
  Rng rng_pairs = master.fork(1);
  Rng rng_sig = master.fork(2);
  Rng rng_idl = master.fork(3);
  Rng rng_noise_s = master.fork(4);
  Rng rng_noise_i = master.fork(5);
  Rng rng_dark_s = master.fork(6);
  Rng rng_dark_i = master.fork(7);

  std::vector<double> pair_times;
  double pair_rate = model.pair_coeff * power_mw * power_mw;
  pair_times.reserve(static_cast<std::size_t>(pair_rate * duration_s * 1.05) + 64);
  append_poisson_train(pair_times, rng_pairs, pair_rate, duration_s);

  std::vector<std::int64_t> sig_stamps, idl_stamps;
  detect_photons(sig_stamps, rng_sig, pair_times,
                 model.eta_s * det_s.efficiency, det_s.jitter_sigma, duration_s);
  detect_photons(idl_stamps, rng_idl, pair_times,
                 model.eta_i * det_i.efficiency, det_i.jitter_sigma, duration_s);

  std::vector<double> noise_times;
  append_poisson_train(noise_times, rng_noise_s, model.noise_coeff_s * power_mw, duration_s);
  detect_photons(sig_stamps, rng_noise_s, noise_times,
                 model.eta_s_r * det_s.efficiency, det_s.jitter_sigma, duration_s);
  noise_times.clear();
  append_poisson_train(noise_times, rng_noise_i, model.noise_coeff_i * power_mw, duration_s);
  detect_photons(idl_stamps, rng_noise_i, noise_times,
                 model.eta_i_r * det_i.efficiency, det_i.jitter_sigma, duration_s);

  std::vector<double> dark_times;
  append_poisson_train(dark_times, rng_dark_s, det_s.dark_rate, duration_s);
  for (double t : dark_times)
    sig_stamps.push_back(static_cast<std::int64_t>(std::llround(t * kPsPerSecond)));
  dark_times.clear();
  append_poisson_train(dark_times, rng_dark_i, det_i.dark_rate, duration_s);
  for (double t : dark_times)
    idl_stamps.push_back(static_cast<std::int64_t>(std::llround(t * kPsPerSecond)));

  SimulatedStreams out;
  out.signal = finalize_channel(sig_stamps, kSignalChannel, det_s.dead_time);
  out.idler = finalize_channel(idl_stamps, kIdlerChannel, det_i.dead_time);
  return out;
}

namespace {

void check_sorted(const std::vector<TimeTagEvent>& ev, const char* name) {
  for (std::size_t i = 1; i < ev.size(); ++i)
    if (ev[i].timestamp_ps < ev[i - 1].timestamp_ps)
      throw std::invalid_argument(std::string("histogram_coincidences: stream ") +
                                  name + " is not time-sorted");
}

}  // namespace

CoincidenceHistogram histogram_coincidences(const std::vector<TimeTagEvent>& a,
                                            const std::vector<TimeTagEvent>& b,
                                            std::int64_t bin_width_ps,
                                            std::int64_t span_ps) {
  if (bin_width_ps <= 0) throw std::invalid_argument("histogram: bin width must be > 0");
  if (span_ps <= 0 || span_ps % bin_width_ps != 0)
    throw std::invalid_argument("histogram: span must be a positive multiple of the bin width");
  check_sorted(a, "a");
  check_sorted(b, "b");

  CoincidenceHistogram h;
  h.bin_width_ps = bin_width_ps;
  h.offset_ps = -span_ps / 2;
  h.counts.assign(static_cast<std::size_t>(span_ps / bin_width_ps), 0);

  std::size_t lo = 0;
  for (const auto& ea : a) {
    const std::int64_t win_lo = ea.timestamp_ps + h.offset_ps;
    const std::int64_t win_hi = win_lo + span_ps;
    while (lo < b.size() && b[lo].timestamp_ps < win_lo) ++lo;
    for (std::size_t j = lo; j < b.size() && b[j].timestamp_ps < win_hi; ++j) {
      std::int64_t delta = b[j].timestamp_ps - ea.timestamp_ps;
      ++h.counts[static_cast<std::size_t>((delta - h.offset_ps) / bin_width_ps)];
    }
  }
  return h;
}

WindowCounts window_counts(const CoincidenceHistogram& hist, std::int64_t window_ps,
                           std::int64_t center_ps,
                           const std::vector<std::int64_t>& accidental_offsets_ps) {
  if (hist.counts.empty()) throw std::invalid_argument("window_counts: empty histogram");
  if (window_ps <= 0 || window_ps % hist.bin_width_ps != 0)
    throw std::invalid_argument("window_counts: window must be a positive multiple of the bin width");
  if (accidental_offsets_ps.empty())
    throw std::invalid_argument("window_counts: need at least one accidental window");

  const std::int64_t span = static_cast<std::int64_t>(hist.counts.size()) * hist.bin_width_ps;
  const std::int64_t half = window_ps / 2;
  auto window_sum = [&](std::int64_t center) {
    std::int64_t lo = center - half;
    std::int64_t hi = lo + window_ps;
    if (lo < hist.offset_ps || hi > hist.offset_ps + span)
      throw std::invalid_argument("window_counts: window extends outside the histogram span");
    if ((lo - hist.offset_ps) % hist.bin_width_ps != 0)
      throw std::invalid_argument("window_counts: window edges must align with histogram bins");
    std::size_t first = static_cast<std::size_t>((lo - hist.offset_ps) / hist.bin_width_ps);
    std::size_t n = static_cast<std::size_t>(window_ps / hist.bin_width_ps);
    double s = 0.0;
    for (std::size_t i = first; i < first + n; ++i) s += static_cast<double>(hist.counts[i]);
    return s;
  };

  for (std::int64_t off : accidental_offsets_ps) {
    if (std::llabs(off - center_ps) < window_ps) {
      std::ostringstream msg;
      msg << "window_counts: accidental window at " << off
          << " ps overlaps the peak window at " << center_ps << " ps";
      throw std::invalid_argument(msg.str());
    }
  }

  WindowCounts out;
  out.coincidences = window_sum(center_ps);
  double acc = 0.0;
  for (std::int64_t off : accidental_offsets_ps) acc += window_sum(off);
  out.accidentals = acc / static_cast<double>(accidental_offsets_ps.size());
  return out;
}

void PulseTrain::validate() const {
  if (!(rep_rate_hz > 0.0)) throw std::invalid_argument("PulseTrain: rep_rate must be > 0");
  if (pulse_interval_ps <= 0)
    throw std::invalid_argument("PulseTrain: pulse_interval must be > 0");
  if (pulse_interval_ps >= period_ps())
    throw std::invalid_argument("PulseTrain: pulse_interval must be shorter than the period");
  if (pulse_width_ps <= 0 || pulse_width_ps >= pulse_interval_ps)
    throw std::invalid_argument("PulseTrain: pulse_width must be in (0, pulse_interval)");
  if (extinction_ratio_db < 0.0)
    throw std::invalid_argument("PulseTrain: extinction_ratio must be >= 0 dB");
}

std::int64_t PulseTrain::period_ps() const {
  return static_cast<std::int64_t>(std::llround(kPsPerSecond / rep_rate_hz));
}

std::int64_t PulseTrain::slot_timestamp_ps(std::uint64_t index, int slot) const {
  if (slot < 1 || slot > 3) throw std::invalid_argument("PulseTrain: slot must be 1, 2 or 3");
  return static_cast<std::int64_t>(index) * period_ps() +
         static_cast<std::int64_t>(slot - 1) * pulse_interval_ps;
}

namespace {

Eigen::Matrix2cd middle_slot_projector(double theta, int port) {
  // (|1> + s e^{-i theta} |2>)/sqrt(2), s = +1 on the first port, -1 on the second
  std::complex<double> s_phase =
      (port == 0 ? 1.0 : -1.0) * std::exp(std::complex<double>(0.0, -theta));
  Eigen::Vector2cd e;
  e << 1.0, s_phase;
  e /= std::sqrt(2.0);
  return 0.5 * (e * e.adjoint());
}

Eigen::Matrix2cd slot_operator(int slot, double theta, int port) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  switch (slot) {
    case 1: m(0, 0) = 0.25; return m;
    case 3: m(1, 1) = 0.25; return m;
    case 2: return middle_slot_projector(theta, port);
  }
  throw std::logic_error("slot_operator: bad slot");
}

Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& A, const Eigen::Matrix2cd& B) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block<2, 2>(2 * i, 2 * j) = A(i, j) * B;
  return out;
}

}  // namespace

TimebinDistribution timebin_distribution(const DensityMatrix& rho, double alpha,
                                         double beta) {
  if (rho.basis() != Basis::timebin)
    throw std::invalid_argument("timebin_distribution: state must be in the time-bin basis");
  if (std::abs(rho.trace() - 1.0) > 1e-6)
    throw std::invalid_argument("timebin_distribution: state must have unit trace");
  if (rho.min_eigenvalue() < -1e-9)
    throw std::invalid_argument("timebin_distribution: state is not positive semidefinite");

  TimebinDistribution dist;
  double total = 0.0;
  for (int pa = 0; pa < 2; ++pa)
    for (int pb = 0; pb < 2; ++pb)
      for (int sa = 1; sa <= 3; ++sa)
        for (int sb = 1; sb <= 3; ++sb) {
          Eigen::Matrix4cd op = kron2(slot_operator(sa, alpha, pa), slot_operator(sb, beta, pb));
          double p = (rho.matrix() * op).trace().real();
          if (p < 0.0) {
            if (p < -1e-9) throw std::logic_error("timebin_distribution: negative probability");
            p = 0.0;
          }
          dist.p[pa][pb][sa - 1][sb - 1] = p;
          total += p;
        }
  if (total > 1.0 + 1e-9)
    throw std::logic_error("timebin_distribution: probabilities exceed 1");
  dist.residual = std::max(0.0, 1.0 - total);
  return dist;
}

TimebinOutcomeTable sample_timebin_outcomes(const DensityMatrix& rho, double alpha,
                                            double beta, std::uint64_t n_pairs,
                                            double background_rate, std::uint64_t seed) {
  if (background_rate < 0.0)
    throw std::invalid_argument("sample_timebin_outcomes: background_rate must be >= 0");
  TimebinDistribution dist = timebin_distribution(rho, alpha, beta);

  // Flatten to a CDF over the 36 joint cells plus the residual.
  std::vector<double> cdf;
  cdf.reserve(37);
  double acc = 0.0;
  for (int pa = 0; pa < 2; ++pa)
    for (int pb = 0; pb < 2; ++pb)
      for (int sa = 0; sa < 3; ++sa)
        for (int sb = 0; sb < 3; ++sb) {
          acc += dist.p[pa][pb][sa][sb];
          cdf.push_back(acc);
        }
  cdf.push_back(1.0);

  TimebinOutcomeTable table;
  table.n_pairs = n_pairs;
  table.alpha = alpha;
  table.beta = beta;
  Rng rng(seed);
  for (std::uint64_t k = 0; k < n_pairs; ++k) {
    std::size_t cell = rng.categorical(cdf);
    if (cell >= 36) {
      ++table.lost;
      continue;
    }
    int sb = static_cast<int>(cell % 3);
    int sa = static_cast<int>((cell / 3) % 3);
    int pb = static_cast<int>((cell / 9) % 2);
    int pa = static_cast<int>(cell / 18);
    ++table.counts[pa][pb][sa][sb];
  }
  if (background_rate > 0.0) {
    std::uint64_t n_bg = rng.poisson(background_rate * static_cast<double>(n_pairs));
    for (std::uint64_t k = 0; k < n_bg; ++k) {
      std::size_t cell = static_cast<std::size_t>(rng.uniform() * 36.0);
      if (cell >= 36) cell = 35;
      int sb = static_cast<int>(cell % 3);
      int sa = static_cast<int>((cell / 3) % 3);
      int pb = static_cast<int>((cell / 9) % 2);
      int pa = static_cast<int>(cell / 18);
      ++table.counts[pa][pb][sa][sb];
    }
  }
  return table;
}

std::uint64_t TimebinOutcomeTable::total_recorded() const {
  std::uint64_t s = 0;
  for (const auto& a : counts)
    for (const auto& b : a)
      for (const auto& c : b)
        for (std::uint64_t v : c) s += v;
  return s;
}

namespace {

std::string cell_key(int pa, int pb, int sa, int sb) {
  std::ostringstream k;
  k << 'A' << (pa + 1) << ",B" << (pb + 1) << ',' << (sa + 1) << ',' << (sb + 1);
  return k.str();
}

}  // namespace

nlohmann::json TimebinOutcomeTable::to_json() const {
  nlohmann::json cells = nlohmann::json::object();
  for (int pa = 0; pa < 2; ++pa)
    for (int pb = 0; pb < 2; ++pb)
      for (int sa = 0; sa < 3; ++sa)
        for (int sb = 0; sb < 3; ++sb)
          cells[cell_key(pa, pb, sa, sb)] = counts[pa][pb][sa][sb];
  return nlohmann::json{{"alpha", alpha},
                        {"beta", beta},
                        {"n_pairs", n_pairs},
                        {"lost", lost},
                        {"counts", std::move(cells)}};
}

TimebinOutcomeTable TimebinOutcomeTable::from_json(const nlohmann::json& j) {
  TimebinOutcomeTable t;
  t.alpha = j.at("alpha").get<double>();
  t.beta = j.at("beta").get<double>();
  t.n_pairs = j.at("n_pairs").get<std::uint64_t>();
  t.lost = j.at("lost").get<std::uint64_t>();
  const auto& cells = j.at("counts");
  for (int pa = 0; pa < 2; ++pa)
    for (int pb = 0; pb < 2; ++pb)
      for (int sa = 0; sa < 3; ++sa)
        for (int sb = 0; sb < 3; ++sb)
          t.counts[pa][pb][sa][sb] =
              cells.at(cell_key(pa, pb, sa, sb)).get<std::uint64_t>();
  return t;
}

}  // namespace paircraft

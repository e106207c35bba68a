#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/counting_model.hpp"
#include "core/io.hpp"
#include "core/quantum_state.hpp"

namespace paircraft {

struct DetectorModel {
  double efficiency = 1.0;    // detection probability applied to photon events
  double dark_rate = 0.0;     // Hz, fired regardless of illumination
  double jitter_sigma = 0.0;  // s, Gaussian timing error per detection
  double dead_time = 0.0;     // s, non-paralyzable
  void validate() const;
};

// Channel ids in the emitted event streams.
inline constexpr int kSignalChannel = 0;
inline constexpr int kIdlerChannel = 1;

// Monte-Carlo realization of the counting model: pairs emitted as a Poisson
// process at pair_coeff*P^2 with one shared emission time per pair, each
// photon then independently thinned by (collection efficiency x detector
// efficiency), jittered, rounded to integer picoseconds and passed through
// the dead-time gate. Channel noise photons (linear in P, thinned by the
// noise-path collection efficiency) and detector dark counts are independent
// Poisson processes; dark rates come from the DetectorModel — the analytic
// counterpart of a run is predict_counts on a SourceModel carrying the same
// per-channel dark rates and the efficiency products. Deterministic per seed.
struct SimulatedStreams {
  std::vector<TimeTagEvent> signal;
  std::vector<TimeTagEvent> idler;
};
SimulatedStreams simulate_cw(const SourceModel& model,
                             const DetectorModel& det_s, const DetectorModel& det_i,
                             double power_mw, double duration_s, std::uint64_t seed);

struct CoincidenceHistogram {
  std::int64_t bin_width_ps = 1;
  std::int64_t offset_ps = 0;  // left edge of the first bin
  std::vector<std::uint64_t> counts;
  std::int64_t bin_left_edge(std::size_t i) const {
    return offset_ps + static_cast<std::int64_t>(i) * bin_width_ps;
  }
};

// Histogram of delays (t_b - t_a) over [-span/2, span/2), one pass over both
// sorted streams. Every pair whose delay falls in the span is counted.
CoincidenceHistogram histogram_coincidences(const std::vector<TimeTagEvent>& a,
                                            const std::vector<TimeTagEvent>& b,
                                            std::int64_t bin_width_ps,
                                            std::int64_t span_ps);

// Sum over one window centred on the peak plus the mean over displaced
// windows of the same width: (coincidence count, accidental estimate).
// Windows must lie inside the histogram and must not overlap the peak
// window; window edges must align with histogram bins.
struct WindowCounts {
  double coincidences = 0.0;
  double accidentals = 0.0;
};
WindowCounts window_counts(const CoincidenceHistogram& hist, std::int64_t window_ps,
                           std::int64_t center_ps,
                           const std::vector<std::int64_t>& accidental_offsets_ps);

struct PulseTrain {
  double rep_rate_hz = 0.0;
  std::int64_t pulse_interval_ps = 0;  // early/late slot separation
  std::int64_t pulse_width_ps = 0;
  double extinction_ratio_db = 0.0;
  void validate() const;  // pulse_interval < period, width < interval
  std::int64_t period_ps() const;
  // Nominal timestamp of slot 1/2/3 within pair window `index` (slot 2 is
  // the overlap slot, one interval after slot 1).
  std::int64_t slot_timestamp_ps(std::uint64_t index, int slot) const;
};

// One analysis setting per side: interferometer phase plus the port the
// photon exited. Ports carry opposite middle-slot superposition signs.
struct TimebinOutcomeTable {
  // counts[portA][portB][slotA-1][slotB-1], ports 0=A1/B1, 1=A2/B2
  std::array<std::array<std::array<std::array<std::uint64_t, 3>, 3>, 2>, 2> counts{};
  std::uint64_t lost = 0;
  std::uint64_t n_pairs = 0;
  double alpha = 0.0;
  double beta = 0.0;
  std::uint64_t total_recorded() const;
  nlohmann::json to_json() const;
  static TimebinOutcomeTable from_json(const nlohmann::json& j);
};

// Multinomial sampling of joint (port, slot) outcomes for both photons of a
// time-bin state. Per-photon operators: slot 1 -> |1><1|/4, slot 3 ->
// |2><2|/4, middle slot at the port with sign s and phase theta ->
// |e><e|/2 with |e> = (|1> + s e^{-i theta}|2>)/sqrt(2). The operator set
// is complete over the two ports, so "lost" stays at the numerical floor;
// it is tracked to keep the normalization check exact. Background counts
// are Poisson, spread uniformly over the 36 joint cells at a rate of
// background_rate counts per generated pair.
TimebinOutcomeTable sample_timebin_outcomes(const DensityMatrix& rho, double alpha,
                                            double beta, std::uint64_t n_pairs,
                                            double background_rate, std::uint64_t seed);

// Analytic joint distribution behind sample_timebin_outcomes (no background):
// probabilities[port_a][port_b][slot_a-1][slot_b-1] plus the residual.
struct TimebinDistribution {
  std::array<std::array<std::array<std::array<double, 3>, 3>, 2>, 2> p{};
  double residual = 0.0;
};
TimebinDistribution timebin_distribution(const DensityMatrix& rho, double alpha,
                                         double beta);

}  // namespace paircraft

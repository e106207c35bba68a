#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "core/counting_model.hpp"
#include "core/spectral_model.hpp"
#include "core/timetag_sim.hpp"
#include "core/tomography.hpp"

namespace paircraft {

// Flat `key = value` text. '#' starts a comment; values keep their unit
// suffix and are interpreted by the typed getters of RunConfig.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;
  static KeyValueConfig from_file(const std::string& path);
  static KeyValueConfig from_string(const std::string& text,
                                    const std::string& origin = "<config>");
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& raw(const std::string& key) const;
  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

// Everything a run needs, with the bundled reference experiment as the
// default operating point. Frequencies are derived from the wavelengths
// once (exact c), and the idler is pinned to energy conservation:
// omega_i0 = 2*omega_p0 - omega_s0.
struct RunConfig {
  // wavelengths and spectral layout
  double pump_wavelength_m;
  double signal_wavelength_m;
  double filter_bandwidth_hz;   // full rect width, cycles/s
  double umzi_delay_s;
  double umzi_phase_rad;
  double umzi_split_ratio;
  int grid_points;
  double grid_span_rad;         // 0 = derive from filters and detunings
  double mu_c;

  // counting model
  SourceModel source;

  // detectors (monte carlo)
  DetectorModel detector_s;
  DetectorModel detector_i;

  // run parameters
  double power_mw;
  double duration_s;
  std::uint64_t seed;

  // double-pulse layout
  PulseTrain pulses;

  // frequency-order coherence parameters
  FreqBinParams freqbin;

  static RunConfig defaults();
  // Applies overrides from cfg; collects every problem (unknown key, bad
  // number, bad unit, out-of-range value) and throws one invalid_argument
  // listing them all.
  static RunConfig from_config(const KeyValueConfig& cfg);

  double omega_p0() const;
  double omega_s0() const;
  double omega_i0() const;          // 2*omega_p0 - omega_s0
  double delta_omega_si() const;    // 2*(omega_p0 - omega_s0), signed
  double filter_bandwidth_rad() const;
  double grid_span() const;         // explicit value or the derived default
  FilterSpec signal_filter() const;
  FilterSpec idler_filter() const;
  UmziConfig umzi() const;
  void validate() const;
};

}  // namespace paircraft

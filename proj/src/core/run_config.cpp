#include "core/run_config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "core/io.hpp"
#include "core/units.hpp"

namespace paircraft {

KeyValueConfig KeyValueConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path + " for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_string(buf.str(), path);
}

KeyValueConfig KeyValueConfig::from_string(const std::string& text,
                                           const std::string& origin) {
  KeyValueConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::string stripped = trim(line);
    if (stripped.empty()) continue;
    auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(origin + ":" + std::to_string(line_no) +
                               ": expected 'key = value'");
    std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::runtime_error(origin + ":" + std::to_string(line_no) +
                               ": empty key or value");
    if (cfg.values_.count(key))
      throw std::runtime_error(origin + ":" + std::to_string(line_no) +
                               ": duplicate key '" + key + "'");
    cfg.values_[key] = value;
  }
  return cfg;
}

const std::string& KeyValueConfig::raw(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end())
    throw std::invalid_argument("config key '" + key + "' is not set");
  return it->second;
}

RunConfig RunConfig::defaults() {
  // Quantities with unit suffixes are written value * scale so that parsing
  // the same numbers from configuration text lands on identical doubles.
  RunConfig c;
  c.pump_wavelength_m = 1540.46 * 1e-9;
  c.signal_wavelength_m = 1531.72 * 1e-9;
  c.filter_bandwidth_hz = 125.0 * 1e9;
  c.umzi_delay_s = 625.0 * 1e-12;
  c.umzi_phase_rad = 0.0;
  c.umzi_split_ratio = 1.0 / std::sqrt(2.0);
  c.grid_points = 32768;
  c.grid_span_rad = 0.0;
  c.mu_c = 1.0;
  c.source = reference_source_model();
  c.detector_s = DetectorModel{1.0, 150.0, 100.0 * 1e-12, 30.0 * 1e-9};
  c.detector_i = DetectorModel{1.0, 150.0, 100.0 * 1e-12, 30.0 * 1e-9};
  c.power_mw = 0.273;
  c.duration_s = 20.0;
  c.seed = 1;
  c.pulses = PulseTrain{100e6, 625, 125, 20.0};
  c.freqbin = FreqBinParams{0.502, 0.9685, 0.182};
  return c;
}

RunConfig RunConfig::from_config(const KeyValueConfig& cfg) {
  RunConfig out = defaults();
  std::vector<std::string> errors;

  std::map<std::string, std::function<void(const std::string&)>> setters;
  auto bind_time = [&](const char* key, double* dst) {
    setters[key] = [dst](const std::string& v) { *dst = parse_time_s(v); };
  };
  auto bind_freq = [&](const char* key, double* dst) {
    setters[key] = [dst](const std::string& v) { *dst = parse_freq_hz(v); };
  };
  auto bind_length = [&](const char* key, double* dst) {
    setters[key] = [dst](const std::string& v) { *dst = parse_length_m(v); };
  };
  auto bind_power = [&](const char* key, double* dst) {
    setters[key] = [dst](const std::string& v) { *dst = parse_power_mw(v); };
  };
  auto bind_number = [&](const char* key, double* dst) {
    setters[key] = [dst](const std::string& v) { *dst = parse_number(v); };
  };

  bind_length("pump_wavelength", &out.pump_wavelength_m);
  bind_length("signal_wavelength", &out.signal_wavelength_m);
  bind_freq("filter_bandwidth", &out.filter_bandwidth_hz);
  bind_time("umzi_delay", &out.umzi_delay_s);
  bind_number("umzi_phase", &out.umzi_phase_rad);
  bind_number("umzi_split_ratio", &out.umzi_split_ratio);
  setters["grid_points"] = [&out](const std::string& v) {
    double d = parse_number(v);
    if (d < 1.0 || d != std::floor(d)) throw std::invalid_argument("must be a positive integer");
    out.grid_points = static_cast<int>(d);
  };
  setters["grid_span"] = [&out](const std::string& v) {
    out.grid_span_rad = 2.0 * M_PI * parse_freq_hz(v);
  };
  bind_number("mu_c", &out.mu_c);

  bind_number("pair_coeff", &out.source.pair_coeff);
  bind_number("noise_coeff_s", &out.source.noise_coeff_s);
  bind_number("noise_coeff_i", &out.source.noise_coeff_i);
  bind_number("eta_s", &out.source.eta_s);
  bind_number("eta_i", &out.source.eta_i);
  bind_number("eta_s_r", &out.source.eta_s_r);
  bind_number("eta_i_r", &out.source.eta_i_r);
  bind_freq("dark_s", &out.source.dark_s);
  bind_freq("dark_i", &out.source.dark_i);
  bind_time("coincidence_window", &out.source.window);

  bind_number("det_efficiency_s", &out.detector_s.efficiency);
  bind_number("det_efficiency_i", &out.detector_i.efficiency);
  setters["det_dark_s"] = [&out](const std::string& v) {
    out.detector_s.dark_rate = parse_freq_hz(v);
  };
  setters["det_dark_i"] = [&out](const std::string& v) {
    out.detector_i.dark_rate = parse_freq_hz(v);
  };
  setters["det_jitter"] = [&out](const std::string& v) {
    out.detector_s.jitter_sigma = out.detector_i.jitter_sigma = parse_time_s(v);
  };
  setters["det_dead_time"] = [&out](const std::string& v) {
    out.detector_s.dead_time = out.detector_i.dead_time = parse_time_s(v);
  };

  bind_power("power", &out.power_mw);
  bind_time("duration", &out.duration_s);
  setters["seed"] = [&out](const std::string& v) {
    std::size_t pos = 0;
    out.seed = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("must be an unsigned integer");
  };

  setters["pulse_rep_rate"] = [&out](const std::string& v) {
    out.pulses.rep_rate_hz = parse_freq_hz(v);
  };
  setters["pulse_interval"] = [&out](const std::string& v) {
    out.pulses.pulse_interval_ps = static_cast<std::int64_t>(
        std::llround(parse_time_s(v) * 1e12));
  };
  setters["pulse_width"] = [&out](const std::string& v) {
    out.pulses.pulse_width_ps = static_cast<std::int64_t>(
        std::llround(parse_time_s(v) * 1e12));
  };
  bind_number("pulse_extinction", &out.pulses.extinction_ratio_db);

  bind_number("freqbin_a", &out.freqbin.a);
  bind_number("freqbin_v", &out.freqbin.v);
  bind_number("freqbin_phi", &out.freqbin.phi);

  for (const auto& [key, value] : cfg.entries()) {
    auto it = setters.find(key);
    if (it == setters.end()) {
      errors.push_back("unknown key '" + key + "'");
      continue;
    }
    try {
      it->second(value);
    } catch (const std::exception& e) {
      errors.push_back("key '" + key + "' = '" + value + "': " + e.what());
    }
  }

  if (errors.empty()) {
    try {
      out.validate();
    } catch (const std::exception& e) {
      errors.push_back(e.what());
    }
  }
  if (!errors.empty()) {
    std::ostringstream msg;
    msg << "configuration errors:";
    for (const auto& e : errors) msg << "\n  - " << e;
    throw std::invalid_argument(msg.str());
  }
  return out;
}

void RunConfig::validate() const {
  if (!(pump_wavelength_m > 0.0))
    throw std::invalid_argument("pump_wavelength must be positive");
  if (!(signal_wavelength_m > 0.0))
    throw std::invalid_argument("signal_wavelength must be positive");
  if (!(filter_bandwidth_hz > 0.0))
    throw std::invalid_argument("filter_bandwidth must be positive");
  if (umzi_delay_s < 0.0) throw std::invalid_argument("umzi_delay must be >= 0");
  if (grid_points < 64) throw std::invalid_argument("grid_points must be >= 64");
  if (!(mu_c > 0.0)) throw std::invalid_argument("mu_c must be positive");
  if (power_mw < 0.0) throw std::invalid_argument("power must be >= 0");
  if (!(duration_s > 0.0)) throw std::invalid_argument("duration must be positive");
  source.validate();
  detector_s.validate();
  detector_i.validate();
  pulses.validate();
  freqbin.validate();
  umzi().validate();
}

double RunConfig::omega_p0() const { return omega_from_wavelength(pump_wavelength_m); }
double RunConfig::omega_s0() const { return omega_from_wavelength(signal_wavelength_m); }
double RunConfig::omega_i0() const { return 2.0 * omega_p0() - omega_s0(); }
double RunConfig::delta_omega_si() const { return 2.0 * (omega_p0() - omega_s0()); }
double RunConfig::filter_bandwidth_rad() const { return 2.0 * M_PI * filter_bandwidth_hz; }

double RunConfig::grid_span() const {
  if (grid_span_rad > 0.0) return grid_span_rad;
  return 4.0 * std::abs(omega_s0() - omega_p0()) + 4.0 * filter_bandwidth_rad();
}

FilterSpec RunConfig::signal_filter() const {
  return FilterSpec{omega_s0(), filter_bandwidth_rad()};
}

FilterSpec RunConfig::idler_filter() const {
  return FilterSpec{omega_i0(), filter_bandwidth_rad()};
}

UmziConfig RunConfig::umzi() const {
  return UmziConfig{umzi_delay_s, umzi_phase_rad, umzi_split_ratio};
}

}  // namespace paircraft

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/quantum_state.hpp"

namespace paircraft {

struct TimeTagEvent {
  int channel;
  std::int64_t timestamp_ps;
};

struct XySeries {
  std::vector<double> x;
  std::vector<double> y;
};

// All readers throw std::runtime_error naming the file and line on malformed
// input (missing header, wrong column count, unparsable number).

// Generic two-column numeric CSV with an exact expected header.
void write_xy_csv(const std::string& path, const std::string& x_name,
                  const std::string& y_name, const XySeries& data);
XySeries read_xy_csv(const std::string& path, const std::string& x_name,
                     const std::string& y_name);
// Same layout but accepts any column names in the header row.
XySeries read_xy_csv_any(const std::string& path);

// Header `power_mw,counts_hz`.
XySeries read_power_sweep_csv(const std::string& path);
void write_power_sweep_csv(const std::string& path, const XySeries& data);

// Header `channel,timestamp_ps`; events are written sorted by timestamp.
void write_events_csv(const std::string& path, std::vector<TimeTagEvent> events);
std::vector<TimeTagEvent> read_events_csv(const std::string& path);

// Header `delay_ps,count`.
void write_histogram_csv(const std::string& path,
                         const std::vector<std::int64_t>& delay_ps,
                         const std::vector<double>& count);
void read_histogram_csv(const std::string& path,
                        std::vector<std::int64_t>& delay_ps,
                        std::vector<double>& count);

// Density matrices serialize as 4x4 real arrays "re" and "im" plus a
// "basis" tag ("timebin" | "freqbin").
nlohmann::json density_matrix_to_json(const DensityMatrix& rho);
DensityMatrix density_matrix_from_json(const nlohmann::json& j);
void write_density_matrix(const std::string& path, const DensityMatrix& rho);
DensityMatrix read_density_matrix(const std::string& path);

nlohmann::json load_json(const std::string& path);
void save_json(const std::string& path, const nlohmann::json& j);

// Small shared helpers for other parsers.
std::vector<std::string> split_csv_line(const std::string& line);
std::string trim(const std::string& s);

}  // namespace paircraft

#include "core/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace paircraft {

namespace {

[[noreturn]] void fail(const std::string& path, std::size_t line_no, const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path + " for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

double parse_cell(const std::string& cell, const std::string& path, std::size_t line_no) {
  try {
    std::size_t pos = 0;
    double v = std::stod(cell, &pos);
    while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
    if (pos != cell.size()) fail(path, line_no, "trailing characters in '" + cell + "'");
    return v;
  } catch (const std::invalid_argument&) {
    fail(path, line_no, "not a number: '" + cell + "'");
  } catch (const std::out_of_range&) {
    fail(path, line_no, "number out of range: '" + cell + "'");
  }
}

}  // namespace

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(trim(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  cells.push_back(trim(cur));
  return cells;
}

void write_xy_csv(const std::string& path, const std::string& x_name,
                  const std::string& y_name, const XySeries& data) {
  if (data.x.size() != data.y.size())
    throw std::invalid_argument("write_xy_csv: column lengths differ");
  auto out = open_out(path);
  out << x_name << ',' << y_name << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < data.x.size(); ++i)
    out << data.x[i] << ',' << data.y[i] << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

XySeries read_xy_csv(const std::string& path, const std::string& x_name,
                     const std::string& y_name) {
  auto in = open_in(path);
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) fail(path, 1, "empty file");
  ++line_no;
  auto header = split_csv_line(line);
  if (header.size() != 2 || header[0] != x_name || header[1] != y_name)
    fail(path, line_no, "expected header '" + x_name + "," + y_name + "', got '" + trim(line) + "'");
  XySeries out;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != 2) fail(path, line_no, "expected 2 columns");
    out.x.push_back(parse_cell(cells[0], path, line_no));
    out.y.push_back(parse_cell(cells[1], path, line_no));
  }
  if (out.x.empty()) fail(path, line_no, "no data rows");
  return out;
}

XySeries read_xy_csv_any(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) fail(path, 1, "empty file");
  ++line_no;
  if (split_csv_line(line).size() != 2) fail(path, line_no, "expected 2 columns");
  XySeries out;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != 2) fail(path, line_no, "expected 2 columns");
    out.x.push_back(parse_cell(cells[0], path, line_no));
    out.y.push_back(parse_cell(cells[1], path, line_no));
  }
  if (out.x.empty()) fail(path, line_no, "no data rows");
  return out;
}

XySeries read_power_sweep_csv(const std::string& path) {
  return read_xy_csv(path, "power_mw", "counts_hz");
}

void write_power_sweep_csv(const std::string& path, const XySeries& data) {
  write_xy_csv(path, "power_mw", "counts_hz", data);
}

void write_events_csv(const std::string& path, std::vector<TimeTagEvent> events) {
  std::stable_sort(events.begin(), events.end(),
                   [](const TimeTagEvent& a, const TimeTagEvent& b) {
                     return a.timestamp_ps < b.timestamp_ps;
                   });
  auto out = open_out(path);
  out << "channel,timestamp_ps\n";
  for (const auto& e : events) out << e.channel << ',' << e.timestamp_ps << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<TimeTagEvent> read_events_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) fail(path, 1, "empty file");
  ++line_no;
  auto header = split_csv_line(line);
  if (header.size() != 2 || header[0] != "channel" || header[1] != "timestamp_ps")
    fail(path, line_no, "expected header 'channel,timestamp_ps'");
  std::vector<TimeTagEvent> events;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != 2) fail(path, line_no, "expected 2 columns");
    TimeTagEvent e;
    try {
      std::size_t pos = 0;
      e.channel = std::stoi(cells[0], &pos);
      if (pos != cells[0].size()) fail(path, line_no, "bad channel '" + cells[0] + "'");
      pos = 0;
      e.timestamp_ps = std::stoll(cells[1], &pos);
      if (pos != cells[1].size()) fail(path, line_no, "bad timestamp '" + cells[1] + "'");
    } catch (const std::logic_error&) {
      fail(path, line_no, "bad event row '" + trim(line) + "'");
    }
    events.push_back(e);
  }
  return events;
}

void write_histogram_csv(const std::string& path,
                         const std::vector<std::int64_t>& delay_ps,
                         const std::vector<double>& count) {
  if (delay_ps.size() != count.size())
    throw std::invalid_argument("write_histogram_csv: column lengths differ");
  auto out = open_out(path);
  out << "delay_ps,count\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < delay_ps.size(); ++i)
    out << delay_ps[i] << ',' << count[i] << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

void read_histogram_csv(const std::string& path,
                        std::vector<std::int64_t>& delay_ps,
                        std::vector<double>& count) {
  auto in = open_in(path);
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) fail(path, 1, "empty file");
  ++line_no;
  auto header = split_csv_line(line);
  if (header.size() != 2 || header[0] != "delay_ps" || header[1] != "count")
    fail(path, line_no, "expected header 'delay_ps,count'");
  delay_ps.clear();
  count.clear();
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != 2) fail(path, line_no, "expected 2 columns");
    try {
      std::size_t pos = 0;
      delay_ps.push_back(std::stoll(cells[0], &pos));
      if (pos != cells[0].size()) fail(path, line_no, "bad delay '" + cells[0] + "'");
    } catch (const std::logic_error&) {
      fail(path, line_no, "bad delay '" + cells[0] + "'");
    }
    count.push_back(parse_cell(cells[1], path, line_no));
  }
  if (delay_ps.empty()) fail(path, line_no, "no data rows");
}

nlohmann::json density_matrix_to_json(const DensityMatrix& rho) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  const auto& m = rho.matrix();
  for (int i = 0; i < 4; ++i) {
    nlohmann::json row_re = nlohmann::json::array();
    nlohmann::json row_im = nlohmann::json::array();
    for (int j = 0; j < 4; ++j) {
      row_re.push_back(m(i, j).real());
      row_im.push_back(m(i, j).imag());
    }
    re.push_back(std::move(row_re));
    im.push_back(std::move(row_im));
  }
  return nlohmann::json{{"re", std::move(re)},
                        {"im", std::move(im)},
                        {"basis", basis_name(rho.basis())}};
}

DensityMatrix density_matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("re") || !j.contains("im") || !j.contains("basis"))
    throw std::runtime_error("density matrix JSON needs 're', 'im' and 'basis'");
  Eigen::Matrix4cd m;
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (!re.is_array() || re.size() != 4 || !im.is_array() || im.size() != 4)
    throw std::runtime_error("density matrix JSON: 're'/'im' must be 4x4 arrays");
  for (int i = 0; i < 4; ++i) {
    if (!re[i].is_array() || re[i].size() != 4 || !im[i].is_array() || im[i].size() != 4)
      throw std::runtime_error("density matrix JSON: 're'/'im' must be 4x4 arrays");
    for (int k = 0; k < 4; ++k)
      m(i, k) = std::complex<double>(re[i][k].get<double>(), im[i][k].get<double>());
  }
  return DensityMatrix(m, basis_from_name(j.at("basis").get<std::string>()));
}

void write_density_matrix(const std::string& path, const DensityMatrix& rho) {
  save_json(path, density_matrix_to_json(rho));
}

DensityMatrix read_density_matrix(const std::string& path) {
  return density_matrix_from_json(load_json(path));
}

nlohmann::json load_json(const std::string& path) {
  auto in = open_in(path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void save_json(const std::string& path, const nlohmann::json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace paircraft

#include "core/units.hpp"

#include <cctype>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace paircraft {

double omega_from_wavelength(double lambda_m) {
  if (!(lambda_m > 0)) throw std::invalid_argument("wavelength must be positive");
  return 2.0 * std::numbers::pi * kSpeedOfLight / lambda_m;
}

double wavelength_from_omega(double omega) {
  if (!(omega > 0)) throw std::invalid_argument("angular frequency must be positive");
  return 2.0 * std::numbers::pi * kSpeedOfLight / omega;
}

namespace {

struct Parsed {
  double value;
  std::string suffix;
};

Parsed split_quantity(const std::string& text) {
  size_t pos = 0;
  double v;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed quantity: '" + text + "'");
  }
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  std::string suffix = text.substr(pos);
  while (!suffix.empty() && std::isspace(static_cast<unsigned char>(suffix.back()))) suffix.pop_back();
  return {v, suffix};
}

double with_scale(const std::string& text, const std::map<std::string, double>& scales,
                  const char* kind) {
  auto [v, suffix] = split_quantity(text);
  if (suffix.empty()) return v;  // base unit
  auto it = scales.find(suffix);
  if (it == scales.end())
    throw std::invalid_argument(std::string("'") + text + "' is not a " + kind + " quantity");
  return v * it->second;
}

}  // namespace

double parse_time_s(const std::string& text) {
  static const std::map<std::string, double> scales = {
      {"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"ns", 1e-9}, {"ps", 1e-12}, {"fs", 1e-15}};
  return with_scale(text, scales, "time");
}

double parse_freq_hz(const std::string& text) {
  static const std::map<std::string, double> scales = {
      {"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}, {"THz", 1e12}};
  return with_scale(text, scales, "frequency");
}

double parse_length_m(const std::string& text) {
  static const std::map<std::string, double> scales = {
      {"m", 1.0}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}, {"pm", 1e-12}};
  return with_scale(text, scales, "length");
}

double parse_power_mw(const std::string& text) {
  // base unit mW: pump powers are quoted in milliwatts throughout
  static const std::map<std::string, double> scales = {
      {"W", 1e3}, {"mW", 1.0}, {"uW", 1e-3}, {"nW", 1e-6}};
  return with_scale(text, scales, "power");
}

double parse_number(const std::string& text) {
  auto [v, suffix] = split_quantity(text);
  if (!suffix.empty())
    throw std::invalid_argument("expected a plain number, got '" + text + "'");
  return v;
}

}  // namespace paircraft

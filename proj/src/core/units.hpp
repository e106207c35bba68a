#pragma once

#include <string>

namespace paircraft {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s, exact

// Vacuum wavelength (m) to angular frequency (rad/s).
double omega_from_wavelength(double lambda_m);
double wavelength_from_omega(double omega);

// Parse "<number>[ <suffix>]" with an SI suffix for the expected dimension.
// A bare number is taken in the base unit (s, Hz, m, mW). Throws
// std::invalid_argument on malformed input or a suffix of the wrong kind.
double parse_time_s(const std::string& text);
double parse_freq_hz(const std::string& text);
double parse_length_m(const std::string& text);
double parse_power_mw(const std::string& text);
double parse_number(const std::string& text);

}  // namespace paircraft

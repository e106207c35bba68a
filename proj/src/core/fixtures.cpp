#include "core/fixtures.hpp"

#include <optional>

namespace paircraft {

namespace {

constexpr double kAbsent = -1.0;

struct RawRow {
  ProjBasis a;
  ProjBasis b;
  double s[4];  // per-setting counts; kAbsent where not measured
};

// Four analyzer settings (alpha, beta) = (0,0), (0,pi/2), (pi/2,0),
// (pi/2,pi/2); a cell is populated only when the row's middle-slot bases
// match the setting.
const RawRow kReferenceRows[16] = {
    {ProjBasis::one, ProjBasis::one, {3658, 3743, 3778, 3632}},
    {ProjBasis::one, ProjBasis::two, {61, 28, 37, 31}},
    {ProjBasis::one, ProjBasis::diag, {4365, kAbsent, 4291, kAbsent}},
    {ProjBasis::one, ProjBasis::right, {kAbsent, 4241, kAbsent, 4339}},
    {ProjBasis::two, ProjBasis::one, {27, 28, 27, 23}},
    {ProjBasis::two, ProjBasis::two, {5217, 5205, 5225, 5146}},
    {ProjBasis::two, ProjBasis::diag, {4577, kAbsent, 4410, kAbsent}},
    {ProjBasis::two, ProjBasis::right, {kAbsent, 4562, kAbsent, 4355}},
    {ProjBasis::diag, ProjBasis::one, {5620, 5696, kAbsent, kAbsent}},
    {ProjBasis::diag, ProjBasis::two, {4582, 4514, kAbsent, kAbsent}},
    {ProjBasis::diag, ProjBasis::diag, {16545, kAbsent, kAbsent, kAbsent}},
    {ProjBasis::diag, ProjBasis::right, {kAbsent, 5165, kAbsent, kAbsent}},
    {ProjBasis::right, ProjBasis::one, {kAbsent, kAbsent, 5797, 5663}},
    {ProjBasis::right, ProjBasis::two, {kAbsent, kAbsent, 4629, 4516}},
    {ProjBasis::right, ProjBasis::diag, {kAbsent, kAbsent, 4843, kAbsent}},
    {ProjBasis::right, ProjBasis::right, {kAbsent, kAbsent, kAbsent, 1329}},
};

}  // namespace

ProjectionCountTable reference_projection_counts() {
  std::vector<ProjectionRow> rows;
  rows.reserve(16);
  for (const RawRow& raw : kReferenceRows) {
    ProjectionRow row;
    row.basis_a = raw.a;
    row.basis_b = raw.b;
    row.n = 0.0;
    row.k = 0;
    for (int s = 0; s < 4; ++s) {
      if (raw.s[s] == kAbsent) continue;
      row.set_counts[s] = raw.s[s];
      row.n += raw.s[s];
      ++row.k;
    }
    rows.push_back(row);
  }
  return ProjectionCountTable(std::move(rows));
}

std::string reference_config_text() {
  return
      "# Reference operating point of the bundled experiment.\n"
      "pump_wavelength = 1540.46 nm\n"
      "signal_wavelength = 1531.72 nm\n"
      "filter_bandwidth = 125 GHz\n"
      "umzi_delay = 625 ps\n"
      "umzi_phase = 0\n"
      "coincidence_window = 300 ps\n"
      "power = 0.273 mW\n"
      "duration = 20 s\n"
      "det_jitter = 100 ps\n"
      "det_dead_time = 30 ns\n"
      "det_dark_s = 150 Hz\n"
      "det_dark_i = 150 Hz\n"
      "pulse_rep_rate = 100 MHz\n"
      "pulse_interval = 625 ps\n"
      "pulse_width = 125 ps\n"
      "seed = 1\n";
}

ReferenceTomoTargets reference_tomo_targets() {
  ReferenceTomoTargets t;
  t.fidelity = 0.8970;
  t.fidelity_band = 0.0435;
  t.diag[0] = 0.4527;
  t.diag[1] = 0.0042;
  t.diag[2] = 0.0091;
  t.diag[3] = 0.5295;
  t.diag_tolerance = 0.05;
  return t;
}

}  // namespace paircraft

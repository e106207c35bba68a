#pragma once

#include <string>

#include "core/tomography.hpp"

namespace paircraft {

// The bundled four-setting projection count table from the reference
// experiment (16 bases, per-setting breakdown where measured). This is the
// canonical regression input for the time-slot tomography pipeline.
ProjectionCountTable reference_projection_counts();

// Flat key = value text describing the reference operating point; parsing
// it through RunConfig::from_config reproduces RunConfig::defaults().
std::string reference_config_text();

// Published reconstruction targets for the reference count table.
struct ReferenceTomoTargets {
  double fidelity;          // fidelity to |Phi+>
  double fidelity_band;     // reported one-sigma-style band
  double diag[4];           // reconstructed diagonal elements
  double diag_tolerance;    // absolute acceptance tolerance per element
};
ReferenceTomoTargets reference_tomo_targets();

}  // namespace paircraft

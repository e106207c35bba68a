#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/estimators.hpp"
#include "core/quantum_state.hpp"

namespace paircraft {

// Projection bases per photon: time slots |1>, |2> and the middle-slot
// superpositions D = (|1>+|2>)/sqrt(2), R = (|1>+i|2>)/sqrt(2).
enum class ProjBasis { one, two, diag, right };
char proj_basis_char(ProjBasis b);
ProjBasis proj_basis_from_char(char c);
Eigen::Vector2cd proj_ket(ProjBasis b);
// Detection weight of the basis in the slot model: time-slot outcomes carry
// 1/4, middle-slot outcomes 1/2 (per photon).
double proj_basis_weight(ProjBasis b);

struct ProjectionRow {
  ProjBasis basis_a;
  ProjBasis basis_b;
  double n = 0.0;  // accumulated coincidence count over the contributing settings
  int k = 1;       // number of analyzer settings the count accumulates over
  double w = 0.0;  // pair detection weight (product of per-photon weights)
  std::array<std::optional<double>, 4> set_counts;  // per-setting breakdown, if known
};

// The 16-row projection table in canonical row order (basis_a major,
// basis_b minor, each in order 1, 2, D, R).
class ProjectionCountTable {
 public:
  explicit ProjectionCountTable(std::vector<ProjectionRow> rows);
  const std::vector<ProjectionRow>& rows() const { return rows_; }

  // CSV columns: index,photon_1,photon_2,dd,dr,rd,rr,n_i — the per-setting
  // cells hold '-' where a basis pair is not measured at that setting; k is
  // inferred from the number of populated cells (all '-' falls back to the
  // canonical pattern 4/2/1 for time-time / mixed / energy-energy rows).
  static ProjectionCountTable from_csv(const std::string& path);
  void to_csv(const std::string& path) const;
  static ProjectionCountTable from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  static int canonical_k(ProjBasis a, ProjBasis b);

 private:
  std::vector<ProjectionRow> rows_;
};

struct ProjectorSet {
  std::array<Eigen::Matrix4cd, 16> ops;  // rank-1 pair projectors, canonical order
  std::array<double, 16> weights;        // pair detection weights in {1/16, 1/8, 1/4}
  std::array<std::pair<ProjBasis, ProjBasis>, 16> labels;
};
ProjectorSet timebin_projectors();

struct LinearReconstruction {
  DensityMatrix rho;      // Hermitian by construction; may be non-positive
  double n_total;         // pair-event normalization from the time-basis rows
  double condition;       // condition number of the 16x16 design matrix
};

// Least-squares inversion of Tr(P_nu rho) = n_nu/(k_nu w_nu N), with N fixed
// so the four time-basis probabilities sum to one.
LinearReconstruction reconstruct_linear(const ProjectionCountTable& table);

// Nearest positive-semidefinite unit-trace matrix in Frobenius distance
// (eigenvalue water-filling). Idempotent; requires trace within 10% of 1.
DensityMatrix project_physical(const DensityMatrix& rho);

// Exact expected counts for a state under the canonical table layout:
// n_nu = Tr(P_nu rho) * k_nu * w_nu * n_scale.
ProjectionCountTable expected_counts(const DensityMatrix& rho, double n_scale);

struct FreqBinParams {
  double a = 0.5;   // population of the (signal, idler) frequency order
  double v = 1.0;   // off-diagonal coherence magnitude
  double phi = 0.0; // coherence phase, rad
  void validate() const;       // a, v in [0, 1]
  bool physical() const;       // v <= 2 sqrt(a (1-a))
};

// Two-frequency-order density matrix: corners of the 4-d frequency basis
// hold (a, 1-a) on the diagonal and (v/2) e^{+-i phi} off it. Unphysical
// parameter combinations are constructible (for analysis) but flagged by
// DensityMatrix::is_physical.
DensityMatrix freqbin_density(const FreqBinParams& p);

// Pools the four analyzer-pair fringe visibilities by plain averaging and
// maps to S = 2*sqrt(2)*V. Requires mutually consistent fitted periods
// (spread <= 5%); sigma is propagated from the fit covariances.
ChshResult chsh_from_fringes(const std::array<FringeFit, 4>& fits);

}  // namespace paircraft

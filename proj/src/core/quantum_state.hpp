#pragma once

#include <Eigen/Dense>
#include <string>

namespace paircraft {

// Two-qubit basis conventions, fixed project-wide:
//   timebin:  (|11>, |12>, |21>, |22>), |ab> = |a>_signal |b>_idler
//   freqbin:  (|ws wi>, |ws ws>, |wi wi>, |wi ws>)
enum class Basis { timebin, freqbin };

const char* basis_name(Basis b);
Basis basis_from_name(const std::string& name);

// Hermitian 4x4 operator with a basis tag. Construction symmetrizes
// (rho + rho^dagger)/2 and records the asymmetry that was removed; above
// 1e-9 a warning goes to stderr. Trace is not forced to 1: published
// matrices are sometimes slightly subnormalized.
class DensityMatrix {
 public:
  DensityMatrix(const Eigen::Matrix4cd& m, Basis basis);

  const Eigen::Matrix4cd& matrix() const { return m_; }
  Basis basis() const { return basis_; }
  double trace() const { return m_.trace().real(); }
  double asymmetry() const { return asymmetry_; }

  Eigen::Vector4d eigenvalues() const;  // ascending
  double min_eigenvalue() const;
  bool is_physical(double tol = 1e-9) const;  // PSD and unit trace within tol

 private:
  Eigen::Matrix4cd m_;
  Basis basis_;
  double asymmetry_ = 0.0;
};

// Normalized pure state; construction rejects norm deviating from 1 by >1e-12
// unless `normalize` is set.
class PureState {
 public:
  PureState(const Eigen::Vector4cd& amps, Basis basis, bool normalize = false);

  const Eigen::Vector4cd& amps() const { return v_; }
  Basis basis() const { return basis_; }

 private:
  Eigen::Vector4cd v_;
  Basis basis_;
};

// <psi| rho |psi>. Requires matching basis tags and trace within trace_tol
// of 1 (default loose enough to accept published, slightly subnormalized
// matrices; tighten for strict use).
double fidelity(const DensityMatrix& rho, const PureState& psi, double trace_tol = 0.01);

struct ChshResult {
  double s_value;
  double sigma;       // propagated from sigma_v, 0 if not supplied
  double visibility;
};

// S = 2*sqrt(2)*V for the standard settings of a V-visibility fringe.
ChshResult chsh_from_visibility(double visibility, double sigma_v = 0.0);

// Named states: phi_plus, phi_minus, psi_plus, psi_minus (timebin) and
// psi_swap_freq = (|ws wi> + |wi ws>)/sqrt(2) (freqbin).
PureState bell_state(const std::string& name);

}  // namespace paircraft

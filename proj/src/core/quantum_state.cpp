#include "core/quantum_state.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

namespace paircraft {

const char* basis_name(Basis b) {
  return b == Basis::timebin ? "timebin" : "freqbin";
}

Basis basis_from_name(const std::string& name) {
  if (name == "timebin") return Basis::timebin;
  if (name == "freqbin") return Basis::freqbin;
  throw std::invalid_argument("unknown basis '" + name + "'");
}

DensityMatrix::DensityMatrix(const Eigen::Matrix4cd& m, Basis basis) : basis_(basis) {
  const Eigen::Matrix4cd anti = (m - m.adjoint()) / 2.0;
  asymmetry_ = anti.cwiseAbs().maxCoeff();
  if (asymmetry_ > 1e-9)
    std::cerr << "DensityMatrix: symmetrized input with asymmetry " << asymmetry_ << "\n";
  m_ = (m + m.adjoint()) / 2.0;
}

Eigen::Vector4d DensityMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double DensityMatrix::min_eigenvalue() const { return eigenvalues()(0); }

bool DensityMatrix::is_physical(double tol) const {
  return min_eigenvalue() >= -tol && std::abs(trace() - 1.0) <= tol;
}

PureState::PureState(const Eigen::Vector4cd& amps, Basis basis, bool normalize)
    : v_(amps), basis_(basis) {
  const double n = v_.norm();
  if (normalize) {
    if (n == 0) throw std::invalid_argument("cannot normalize the zero vector");
    v_ /= n;
  } else if (std::abs(n - 1.0) > 1e-12) {
    throw std::invalid_argument("pure state is not normalized (|norm-1| = " +
                                std::to_string(std::abs(n - 1.0)) + ")");
  }
}

double fidelity(const DensityMatrix& rho, const PureState& psi, double trace_tol) {
  if (rho.basis() != psi.basis())
    throw std::invalid_argument("fidelity: basis mismatch between state and matrix");
  if (std::abs(rho.trace() - 1.0) > trace_tol)
    throw std::domain_error("fidelity: trace deviates from 1 beyond tolerance");
  const std::complex<double> v = psi.amps().adjoint() * rho.matrix() * psi.amps();
  return v.real();
}

ChshResult chsh_from_visibility(double visibility, double sigma_v) {
  if (!(visibility >= 0.0) || visibility > 1.0)
    throw std::domain_error("visibility must lie in [0, 1]");
  if (sigma_v < 0.0) throw std::invalid_argument("sigma_v must be non-negative");
  const double k = 2.0 * std::sqrt(2.0);
  return {k * visibility, k * sigma_v, visibility};
}

PureState bell_state(const std::string& name) {
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  if (name == "phi_plus") {
    v(0) = s; v(3) = s;
    return PureState(v, Basis::timebin);
  }
  if (name == "phi_minus") {
    v(0) = s; v(3) = -s;
    return PureState(v, Basis::timebin);
  }
  if (name == "psi_plus") {
    v(1) = s; v(2) = s;
    return PureState(v, Basis::timebin);
  }
  if (name == "psi_minus") {
    v(1) = s; v(2) = -s;
    return PureState(v, Basis::timebin);
  }
  if (name == "psi_swap_freq") {
    // (|ws wi> + |wi ws>)/sqrt(2): corners of the freqbin ordering
    v(0) = s; v(3) = s;
    return PureState(v, Basis::freqbin);
  }
  throw std::invalid_argument("unknown bell state '" + name + "'");
}

}  // namespace paircraft

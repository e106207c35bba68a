#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>

#include "core/quantum_state.hpp"
#include "test_util.hpp"

using namespace paircraft;
using std::complex;

namespace {

// Reported reference reconstruction for the bundled count table; kept here
// as a closed-form regression anchor for the fidelity formula.
Eigen::Matrix4cd reported_reference_matrix() {
  Eigen::Matrix4cd m;
  m << complex<double>(0.4527, 0.0), complex<double>(-0.0006, -0.0104),
      complex<double>(0.0367, -0.0411), complex<double>(0.3973, 0.2241),
      complex<double>(-0.0006, 0.0104), complex<double>(0.0042, 0.0),
      complex<double>(-0.0015, -0.0011), complex<double>(-0.0036, 0.0255),
      complex<double>(0.0367, 0.0411), complex<double>(-0.0015, 0.0011),
      complex<double>(0.0091, 0.0), complex<double>(0.0020, 0.0443),
      complex<double>(0.3973, -0.2241), complex<double>(-0.0036, -0.0255),
      complex<double>(0.0020, -0.0443), complex<double>(0.5295, 0.0);
  return m;
}

}  // namespace

TEST_SUITE_BEGIN("quantum_state");

TEST_CASE("basis names round trip") {
  CHECK(basis_from_name("timebin") == Basis::timebin);
  CHECK(basis_from_name("freqbin") == Basis::freqbin);
  CHECK(basis_name(Basis::timebin) == std::string("timebin"));
  CHECK_THROWS_AS(basis_from_name("polarization"), std::invalid_argument);
}

TEST_CASE("named states") {
  PureState phi = bell_state("phi_plus");
  CHECK(phi.basis() == Basis::timebin);
  CHECK(phi.amps()(0).real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(std::abs(phi.amps()(1)) == 0.0);
  CHECK(std::abs(phi.amps()(2)) == 0.0);
  CHECK(phi.amps()(3).real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));

  PureState swap = bell_state("psi_swap_freq");
  CHECK(swap.basis() == Basis::freqbin);
  CHECK(swap.amps()(0).real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(swap.amps()(3).real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));

  CHECK_THROWS_AS(bell_state("ghz"), std::invalid_argument);

  Eigen::Vector4cd unnorm;
  unnorm << 1.0, 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(PureState(unnorm, Basis::timebin), std::invalid_argument);
  PureState ok(unnorm, Basis::timebin, /*normalize=*/true);
  CHECK(ok.amps().norm() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("density matrix construction symmetrizes") {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = 0.5;
  m(3, 3) = 0.5;
  m(0, 3) = complex<double>(0.4, 0.1);
  m(3, 0) = complex<double>(0.4, 0.1);  // deliberately not the conjugate
  DensityMatrix rho(m, Basis::timebin);
  CHECK((rho.matrix() - rho.matrix().adjoint()).norm() == 0.0);
  CHECK(rho.asymmetry() > 0.0);
  CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("physicality checks") {
  Rng rng(5);
  for (int i = 0; i < 10; ++i) {
    DensityMatrix rho = test_util::random_density(rng);
    CHECK(rho.is_physical());
    CHECK(rho.min_eigenvalue() >= -1e-12);
    auto ev = rho.eigenvalues();
    for (int j = 1; j < 4; ++j) CHECK(ev(j) >= ev(j - 1));  // ascending
  }
  Eigen::Matrix4cd neg = Eigen::Matrix4cd::Identity() * 0.4;
  neg(3, 3) = -0.2;
  CHECK_FALSE(DensityMatrix(neg, Basis::timebin).is_physical());
}

TEST_CASE("fidelity closed forms") {
  PureState phi = bell_state("phi_plus");
  Eigen::Matrix4cd proj = phi.amps() * phi.amps().adjoint();
  CHECK(fidelity(DensityMatrix(proj, Basis::timebin), phi) == doctest::Approx(1.0).epsilon(1e-12));

  DensityMatrix mixed(Eigen::Matrix4cd::Identity() * 0.25, Basis::timebin);
  CHECK(fidelity(mixed, phi) == doctest::Approx(0.25).epsilon(1e-12));

  // direct evaluation on the reported matrix: (m00 + m33)/2 + Re m03
  DensityMatrix reported(reported_reference_matrix(), Basis::timebin);
  double expect = 0.5 * (0.4527 + 0.5295) + 0.3973;
  CHECK(expect == doctest::Approx(0.8884).epsilon(1e-12));
  CHECK(fidelity(reported, phi) == doctest::Approx(expect).epsilon(1e-9));

  // trace gate: the reported matrix passes at the default tolerance but a
  // strict tolerance rejects its 0.9955 trace
  CHECK_THROWS_AS(fidelity(reported, phi, 1e-4), std::domain_error);

  // basis tags must match
  CHECK_THROWS_AS(fidelity(mixed, bell_state("psi_swap_freq")), std::invalid_argument);
}

TEST_CASE("fidelity bounds and perturbation structure") {
  Rng rng(17);
  PureState phi = bell_state("phi_plus");
  for (int i = 0; i < 25; ++i) {
    DensityMatrix rho = test_util::random_density(rng);
    double f = fidelity(rho, phi);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0 + 1e-12);
  }

  // adding a traceless Hermitian perturbation with <psi|H|psi> = 0 leaves
  // the fidelity exactly unchanged (it only ever reads the psi diagonal)
  DensityMatrix rho = test_util::random_density(rng);
  double f0 = fidelity(rho, phi);
  Eigen::Vector4cd psi = phi.amps();
  Eigen::Matrix4cd p_psi = psi * psi.adjoint();
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::Matrix4cd g;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) g(r, c) = complex<double>(rng.gaussian(), rng.gaussian());
    Eigen::Matrix4cd h = 0.5 * (g + g.adjoint());
    h -= (psi.adjoint() * h * psi)(0).real() * p_psi;           // no psi diagonal
    h -= (h.trace().real() / 3.0) * (Eigen::Matrix4cd::Identity() - p_psi);  // trace 0
    double f1 = fidelity(DensityMatrix(rho.matrix() + 0.01 * h, Basis::timebin), phi);
    CHECK(f1 == doctest::Approx(f0).epsilon(1e-12));
  }
}

TEST_CASE("chsh from visibility") {
  auto r = chsh_from_visibility(0.9175);
  CHECK(r.s_value == doctest::Approx(2.0 * std::sqrt(2.0) * 0.9175).epsilon(1e-15));
  CHECK(std::abs(r.s_value - 2.595) < 1e-3);
  CHECK(r.sigma == 0.0);
  CHECK(r.visibility == 0.9175);

  auto r2 = chsh_from_visibility(0.9574, 0.0086);
  CHECK(std::abs(r2.s_value - 2.708) < 1e-3);
  CHECK(r2.sigma == doctest::Approx(2.0 * std::sqrt(2.0) * 0.0086).epsilon(1e-12));

  // the classical boundary sits exactly at v = 1/sqrt(2)
  CHECK(chsh_from_visibility(1.0 / std::sqrt(2.0)).s_value == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(chsh_from_visibility(1.0).s_value == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-15));

  // strictly monotonic
  double prev = -1.0;
  for (double v = 0.0; v <= 1.0; v += 0.125) {
    double s = chsh_from_visibility(v).s_value;
    CHECK(s > prev);
    CHECK((s > 2.0) == (v > 1.0 / std::sqrt(2.0)));
    prev = s;
  }

  CHECK_THROWS_AS(chsh_from_visibility(-0.1), std::domain_error);
  CHECK_THROWS_AS(chsh_from_visibility(1.1), std::domain_error);
}

TEST_SUITE_END();

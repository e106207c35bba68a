#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "core/fixtures.hpp"
#include "core/tomography.hpp"
#include "test_util.hpp"

using namespace paircraft;

namespace {

DensityMatrix bell_density(const char* name) {
  PureState psi = bell_state(name);
  return DensityMatrix(psi.amps() * psi.amps().adjoint(), psi.basis());
}

// single-qubit kets behind the four bases, for independent cross-checks
Eigen::Vector2cd expected_ket(ProjBasis b) {
  Eigen::Vector2cd v;
  const double s = 1.0 / std::sqrt(2.0);
  switch (b) {
    case ProjBasis::one: v << 1.0, 0.0; break;
    case ProjBasis::two: v << 0.0, 1.0; break;
    case ProjBasis::diag: v << s, s; break;
    case ProjBasis::right: v << s, std::complex<double>(0.0, s); break;
  }
  return v;
}

}  // namespace

TEST_SUITE_BEGIN("tomography");

TEST_CASE("projection bases and weights") {
  for (ProjBasis b : {ProjBasis::one, ProjBasis::two, ProjBasis::diag, ProjBasis::right}) {
    CHECK((proj_ket(b) - expected_ket(b)).norm() < 1e-15);
    CHECK(proj_basis_from_char(proj_basis_char(b)) == b);
  }
  CHECK(proj_basis_weight(ProjBasis::one) == 0.25);
  CHECK(proj_basis_weight(ProjBasis::two) == 0.25);
  CHECK(proj_basis_weight(ProjBasis::diag) == 0.5);
  CHECK(proj_basis_weight(ProjBasis::right) == 0.5);
  CHECK(proj_basis_char(ProjBasis::diag) == 'D');
  CHECK(proj_basis_char(ProjBasis::right) == 'R');
  CHECK_THROWS_AS(proj_basis_from_char('X'), std::invalid_argument);

  CHECK(ProjectionCountTable::canonical_k(ProjBasis::one, ProjBasis::two) == 4);
  CHECK(ProjectionCountTable::canonical_k(ProjBasis::one, ProjBasis::diag) == 2);
  CHECK(ProjectionCountTable::canonical_k(ProjBasis::right, ProjBasis::two) == 2);
  CHECK(ProjectionCountTable::canonical_k(ProjBasis::diag, ProjBasis::right) == 1);
}

TEST_CASE("pair projector set spans the state space") {
  ProjectorSet set = timebin_projectors();
  for (int i = 0; i < 16; ++i) {
    const auto& P = set.ops[i];
    CHECK((P - P.adjoint()).norm() < 1e-14);          // Hermitian
    CHECK((P * P - P).norm() < 1e-14);                // projector
    CHECK(P.trace().real() == doctest::Approx(1.0));  // rank 1
    double wa = proj_basis_weight(set.labels[i].first);
    double wb = proj_basis_weight(set.labels[i].second);
    CHECK(set.weights[i] == wa * wb);
  }
  // canonical order: basis_a major in the order 1, 2, D, R
  CHECK(set.labels[0].first == ProjBasis::one);
  CHECK(set.labels[0].second == ProjBasis::one);
  CHECK(set.labels[6].first == ProjBasis::two);
  CHECK(set.labels[6].second == ProjBasis::diag);
  CHECK(set.labels[15].first == ProjBasis::right);
  CHECK(set.labels[15].second == ProjBasis::right);

  // the 16 projectors are linearly independent: full-rank Gram matrix
  Eigen::MatrixXd gram(16, 16);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      gram(i, j) = (set.ops[i] * set.ops[j]).trace().real();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  CHECK(lu.rank() == 16);
}

TEST_CASE("count table validation and ordering") {
  auto rows = reference_projection_counts().rows();
  CHECK(rows.size() == 16);
  // constructor restores canonical order regardless of input order
  std::vector<ProjectionRow> shuffled(rows.rbegin(), rows.rend());
  ProjectionCountTable rebuilt(shuffled);
  for (int i = 0; i < 16; ++i) {
    CHECK(rebuilt.rows()[i].basis_a == rows[i].basis_a);
    CHECK(rebuilt.rows()[i].basis_b == rows[i].basis_b);
    CHECK(rebuilt.rows()[i].n == rows[i].n);
  }

  std::vector<ProjectionRow> dup = rows;
  dup[1] = dup[0];
  CHECK_THROWS_WITH_AS(ProjectionCountTable{dup}, doctest::Contains("duplicate"),
                       std::invalid_argument);
  std::vector<ProjectionRow> fifteen(rows.begin(), rows.end() - 1);
  CHECK_THROWS_AS(ProjectionCountTable{fifteen}, std::invalid_argument);
  std::vector<ProjectionRow> neg = rows;
  neg[3].n = -1.0;
  CHECK_THROWS_AS(ProjectionCountTable{neg}, std::invalid_argument);
  std::vector<ProjectionRow> badk = rows;
  badk[2].k = 0;
  CHECK_THROWS_AS(ProjectionCountTable{badk}, std::invalid_argument);
}

TEST_CASE("count table csv and json round trips") {
  ProjectionCountTable table = reference_projection_counts();
  std::string path = test_util::scratch("tomo_table.csv");
  table.to_csv(path);
  ProjectionCountTable back = ProjectionCountTable::from_csv(path);
  for (int i = 0; i < 16; ++i) {
    const auto& a = table.rows()[i];
    const auto& b = back.rows()[i];
    CHECK(a.basis_a == b.basis_a);
    CHECK(a.basis_b == b.basis_b);
    CHECK(a.n == doctest::Approx(b.n).epsilon(1e-12));
    CHECK(a.k == b.k);
    CHECK(a.w == doctest::Approx(b.w).epsilon(1e-12));
    for (int s = 0; s < 4; ++s) {
      CHECK(a.set_counts[s].has_value() == b.set_counts[s].has_value());
      if (a.set_counts[s])
        CHECK(*a.set_counts[s] == doctest::Approx(*b.set_counts[s]).epsilon(1e-12));
    }
  }

  ProjectionCountTable jb = ProjectionCountTable::from_json(table.to_json());
  for (int i = 0; i < 16; ++i) {
    CHECK(jb.rows()[i].n == doctest::Approx(table.rows()[i].n).epsilon(1e-12));
    CHECK(jb.rows()[i].k == table.rows()[i].k);
  }

  CHECK_THROWS_AS(ProjectionCountTable::from_csv(test_util::scratch("absent.csv")),
                  std::runtime_error);
}

TEST_CASE("linear reconstruction inverts exact forward counts") {
  ProjectorSet set = timebin_projectors();

  DensityMatrix phi = bell_density("phi_plus");
  double n_scale = 2.5e5;
  ProjectionCountTable counts = expected_counts(phi, n_scale);
  // spot checks on the forward layout: n = p * k * w * N
  // (1,1) row: p = 1/2, k = 4, w = 1/16
  CHECK(counts.rows()[0].n == doctest::Approx(0.5 * 4.0 / 16.0 * n_scale));
  // (1,2) row is orthogonal to the state
  CHECK(counts.rows()[1].n == doctest::Approx(0.0));
  // (D,D) row: p = 1/2, k = 1, w = 1/4
  CHECK(counts.rows()[10].n == doctest::Approx(0.5 * 0.25 * n_scale));

  LinearReconstruction lin = reconstruct_linear(counts);
  CHECK(test_util::frobenius(lin.rho.matrix(), phi.matrix()) < 1e-9);
  CHECK(lin.n_total == doctest::Approx(n_scale).epsilon(1e-9));

  Rng rng(515151);
  for (int trial = 0; trial < 10; ++trial) {
    DensityMatrix rho = test_util::random_density(rng);
    auto c = expected_counts(rho, 1e4 * (1.0 + trial));
    LinearReconstruction rec = reconstruct_linear(c);
    CHECK(test_util::frobenius(rec.rho.matrix(), rho.matrix()) < 1e-9);
  }

  // scaling every row's k and n together leaves the estimate unchanged
  auto rows = counts.rows();
  for (auto& r : rows) {
    r.k *= 2;
    r.n *= 2.0;
  }
  LinearReconstruction scaled = reconstruct_linear(ProjectionCountTable(rows));
  CHECK(test_util::frobenius(scaled.rho.matrix(), lin.rho.matrix()) < 1e-9);
  CHECK(scaled.n_total == doctest::Approx(lin.n_total).epsilon(1e-9));
}

TEST_CASE("reference counts reconstruct the published state") {
  ProjectionCountTable table = reference_projection_counts();
  LinearReconstruction lin = reconstruct_linear(table);

  // time-basis normalization: 4 * (14811 + 157 + 105 + 20793)
  CHECK(lin.n_total == doctest::Approx(143464.0).epsilon(1e-12));
  CHECK(lin.condition > 1.0);
  CHECK(lin.condition < 20.0);

  ReferenceTomoTargets t = reference_tomo_targets();
  PureState target = bell_state("phi_plus");
  double f_lin = fidelity(lin.rho, target);

  DensityMatrix phys = project_physical(lin.rho);
  CHECK(phys.is_physical());
  double f_phys = fidelity(phys, target);
  CHECK(f_phys > t.fidelity - t.fidelity_band);
  CHECK(f_phys < t.fidelity + t.fidelity_band);
  // clipping the negative eigenvalue shifts the fidelity by a few percent on
  // measured counts; it must stay well short of a qualitative change
  CHECK(std::abs(f_phys - f_lin) < 0.1);

  for (int i = 0; i < 4; ++i) {
    // the raw inversion still carries the unphysical part, so its diagonal
    // sits a touch further out than the projected one
    CHECK(std::abs(lin.rho.matrix()(i, i).real() - t.diag[i]) < 1.5 * t.diag_tolerance);
    CHECK(std::abs(phys.matrix()(i, i).real() - t.diag[i]) < t.diag_tolerance);
  }
}

TEST_CASE("physical projection is a proper projection") {
  // already-physical states pass through unchanged
  Rng rng(909);
  for (int trial = 0; trial < 5; ++trial) {
    DensityMatrix rho = test_util::random_density(rng);
    DensityMatrix proj = project_physical(rho);
    CHECK(test_util::frobenius(proj.matrix(), rho.matrix()) < 1e-12);
  }

  // a known indefinite case: water-filling clips the negative weight
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = 1.1;
  m(3, 3) = -0.1;
  DensityMatrix fixed = project_physical(DensityMatrix(m, Basis::timebin));
  CHECK(fixed.matrix()(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fixed.matrix()(3, 3).real() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(fixed.is_physical());

  // idempotent
  DensityMatrix twice = project_physical(fixed);
  CHECK(test_util::frobenius(twice.matrix(), fixed.matrix()) < 1e-12);

  // projection onto a convex set never moves away from members of the set
  Eigen::Matrix4cd bump = Eigen::Matrix4cd::Zero();
  bump(0, 1) = std::complex<double>(0.3, 0.2);
  bump(1, 0) = std::conj(bump(0, 1));
  bump(0, 0) = 0.25;
  bump(1, 1) = -0.25;
  DensityMatrix seed_state = test_util::random_density(rng);
  DensityMatrix bad(seed_state.matrix() + bump, Basis::timebin);
  DensityMatrix good = project_physical(bad);
  for (int trial = 0; trial < 20; ++trial) {
    DensityMatrix target = test_util::random_density(rng);
    double before = test_util::frobenius(bad.matrix(), target.matrix());
    double after = test_util::frobenius(good.matrix(), target.matrix());
    CHECK(after <= before + 1e-12);
  }

  // trace gate
  DensityMatrix off(Eigen::Matrix4cd::Identity() * 0.2, Basis::timebin);
  CHECK_THROWS_WITH_AS(project_physical(off), doctest::Contains("trace"),
                       std::invalid_argument);
}

TEST_CASE("two-frequency density matrix") {
  FreqBinParams pure{0.5, 1.0, 0.0};
  DensityMatrix rho = freqbin_density(pure);
  CHECK(rho.basis() == Basis::freqbin);
  CHECK(rho.trace() == doctest::Approx(1.0));
  CHECK(rho.eigenvalues()(3) == doctest::Approx(1.0).epsilon(1e-12));  // pure

  PureState target = bell_state("psi_swap_freq");
  CHECK(fidelity(rho, target) == doctest::Approx(1.0).epsilon(1e-12));

  // no coherence leaves even odds
  CHECK(fidelity(freqbin_density({0.5, 0.0, 0.0}), target) == doctest::Approx(0.5));

  // fidelity follows (1 + v cos phi)/2 whatever the population split
  for (double a : {0.1, 0.35, 0.502, 0.9}) {
    for (double v : {0.0, 0.4, 0.9685}) {
      for (double phi : {0.0, 0.182, 1.3, M_PI}) {
        double f = fidelity(freqbin_density({a, v, phi}), target);
        CHECK(f == doctest::Approx((1.0 + v * std::cos(phi)) / 2.0).epsilon(1e-12));
      }
    }
  }

  // the published operating point
  double f_ref = fidelity(freqbin_density({0.502, 0.9685, 0.182}), target);
  CHECK(std::abs(f_ref - 0.9756) < 0.0025);

  // coherence beyond the population bound is representable but flagged
  FreqBinParams skew{0.9, 0.8, 0.0};
  CHECK_FALSE(skew.physical());
  CHECK_FALSE(freqbin_density(skew).is_physical());
  FreqBinParams ok{0.9, 0.55, 0.0};
  CHECK(ok.physical());
  CHECK(freqbin_density(ok).is_physical());

  CHECK_THROWS_AS(freqbin_density({1.2, 0.5, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(freqbin_density({0.5, -0.1, 0.0}), std::invalid_argument);
}

TEST_CASE("pooled fringe visibilities map onto the bell parameter") {
  auto make_fit = [](double v, double k, double var_v) {
    FringeFit f;
    f.c0 = 1000.0;
    f.visibility = v;
    f.phase0 = 0.0;
    f.period_k = k;
    f.period_fixed = false;
    f.covariance = Eigen::MatrixXd::Zero(4, 4);
    f.covariance(1, 1) = var_v;
    return f;
  };

  std::array<FringeFit, 4> fits = {make_fit(0.96, 1.0, 1e-4), make_fit(0.95, 1.01, 1e-4),
                                   make_fit(0.97, 0.99, 1e-4), make_fit(0.948, 1.0, 1e-4)};
  ChshResult r = chsh_from_fringes(fits);
  double v_mean = (0.96 + 0.95 + 0.97 + 0.948) / 4.0;
  CHECK(r.s_value == doctest::Approx(2.0 * std::sqrt(2.0) * v_mean).epsilon(1e-12));
  CHECK(r.visibility == doctest::Approx(v_mean).epsilon(1e-12));
  // pooled mean of four independent estimates: sigma_V = sqrt(sum var)/4
  CHECK(r.sigma == doctest::Approx(2.0 * std::sqrt(2.0) * std::sqrt(4e-4) / 4.0).epsilon(1e-9));

  // inconsistent fitted periods are a hard failure
  std::array<FringeFit, 4> off = fits;
  off[3] = make_fit(0.95, 1.25, 1e-4);
  CHECK_THROWS_WITH_AS(chsh_from_fringes(off), doctest::Contains("period"),
                       std::invalid_argument);
}

TEST_SUITE_END();

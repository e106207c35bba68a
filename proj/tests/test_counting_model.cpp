#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "core/counting_model.hpp"
#include "core/rng.hpp"

using namespace paircraft;

namespace {

SourceModel random_model(Rng& rng) {
  SourceModel m;
  m.pair_coeff = rng.uniform_in(1e3, 1e6);
  m.noise_coeff_s = rng.uniform_in(0.0, 1e4);
  m.noise_coeff_i = rng.uniform_in(0.0, 1e4);
  m.eta_s = rng.uniform_in(0.05, 1.0);
  m.eta_i = rng.uniform_in(0.05, 1.0);
  m.eta_s_r = rng.uniform_in(0.05, 1.0);
  m.eta_i_r = rng.uniform_in(0.05, 1.0);
  m.dark_s = rng.uniform_in(0.0, 1e3);
  m.dark_i = rng.uniform_in(0.0, 1e3);
  m.window = rng.uniform_in(50e-12, 1000e-12);
  return m;
}

}  // namespace

TEST_SUITE_BEGIN("counting_model");

TEST_CASE("zero power leaves only dark counts") {
  SourceModel m;
  m.pair_coeff = 5e5;
  m.noise_coeff_s = 2e3;
  m.noise_coeff_i = 3e3;
  m.eta_s = 0.27;
  m.eta_i = 0.23;
  m.dark_s = 150.0;
  m.dark_i = 150.0;
  m.window = 300e-12;
  auto p = predict_counts(m, 0.0);
  CHECK(p.n_s == 150.0);
  CHECK(p.n_i == 150.0);
  CHECK(p.a_cc == doctest::Approx(150.0 * 150.0 * 300e-12).epsilon(1e-15));
  CHECK(p.c_c == p.a_cc);
  CHECK(p.pair_rate == 0.0);
  CHECK_THROWS_AS(predict_counts(m, -1.0), std::invalid_argument);
}

TEST_CASE("accidentals are exactly the singles product") {
  Rng rng(202);
  for (int i = 0; i < 50; ++i) {
    SourceModel m = random_model(rng);
    auto p = predict_counts(m, rng.uniform_in(0.0, 5.0));
    CHECK(p.a_cc == doctest::Approx(p.n_s * p.n_i * m.window).epsilon(1e-15));
    CHECK(p.c_c >= p.a_cc);
  }
}

TEST_CASE("pair coincidences grow quadratically") {
  SourceModel m;
  m.pair_coeff = 4e5;
  m.eta_s = 0.3;
  m.eta_i = 0.25;
  m.window = 300e-12;
  // no linear noise: doubling the power must quadruple the pair excess
  auto p1 = predict_counts(m, 0.7);
  auto p2 = predict_counts(m, 1.4);
  CHECK((p2.c_c - p2.a_cc) == doctest::Approx(4.0 * (p1.c_c - p1.a_cc)).epsilon(1e-12));
}

TEST_CASE("efficiency scaling of excess and accidentals") {
  SourceModel m;
  m.pair_coeff = 2e5;
  m.eta_s = 0.2;
  m.eta_i = 0.3;
  m.window = 300e-12;  // no noise, no darks
  double k = 1.7;
  SourceModel scaled = m;
  scaled.eta_s = std::min(1.0, m.eta_s * k);
  scaled.eta_i = std::min(1.0, m.eta_i * k);
  auto p = predict_counts(m, 1.1);
  auto q = predict_counts(scaled, 1.1);
  CHECK((q.c_c - q.a_cc) == doctest::Approx(k * k * (p.c_c - p.a_cc)).epsilon(1e-12));
  CHECK(q.a_cc == doctest::Approx(k * k * p.a_cc).epsilon(1e-12));

  // the pair excess scales as k^2 even with noise present
  SourceModel noisy = m;
  noisy.noise_coeff_s = 5e3;
  noisy.noise_coeff_i = 4e3;
  noisy.dark_s = noisy.dark_i = 150.0;
  SourceModel noisy_scaled = noisy;
  noisy_scaled.eta_s = scaled.eta_s;
  noisy_scaled.eta_i = scaled.eta_i;
  auto pn = predict_counts(noisy, 1.1);
  auto qn = predict_counts(noisy_scaled, 1.1);
  CHECK((qn.c_c - qn.a_cc) == doctest::Approx(k * k * (pn.c_c - pn.a_cc)).epsilon(1e-12));
}

TEST_CASE("car arithmetic and error paths") {
  CHECK(car(10.0, 10.0) == 1.0);
  CHECK(car(526.0, 0.01) == doctest::Approx(52600.0).epsilon(1e-12));
  CHECK_THROWS_AS(car(1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(car(-1.0, 2.0), std::domain_error);
}

TEST_CASE("car versus power is unimodal with dark counts") {
  Rng rng(318);
  for (int trial = 0; trial < 5; ++trial) {
    SourceModel m = random_model(rng);
    m.dark_s = rng.uniform_in(50.0, 500.0);
    m.dark_i = rng.uniform_in(50.0, 500.0);
    std::vector<double> cars;
    for (int i = 0; i <= 80; ++i) {
      double p = 1e-3 * std::pow(30.0 / 1e-3, i / 80.0);
      auto pr = predict_counts(m, p);
      cars.push_back(car(pr.c_c, pr.a_cc));
    }
    size_t arg = 0;
    for (size_t i = 1; i < cars.size(); ++i)
      if (cars[i] > cars[arg]) arg = i;
    CHECK(arg > 0);
    CHECK(arg < cars.size() - 1);
    for (size_t i = 1; i <= arg; ++i) CHECK(cars[i] >= cars[i - 1] - 1e-9);
    for (size_t i = arg + 1; i < cars.size(); ++i) CHECK(cars[i] <= cars[i - 1] + 1e-9);

    // darks dominate at vanishing power: CAR -> 1
    auto lo = predict_counts(m, 1e-8);
    CHECK(car(lo.c_c, lo.a_cc) == doctest::Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("rate inversion round trip") {
  // noiseless closed-path example
  SourceModel m;
  m.pair_coeff = 1e6;
  m.eta_s = 0.3;
  m.eta_i = 0.25;
  m.window = 300e-12;
  auto p = predict_counts(m, 1.0);
  auto inv = invert_rates(p.n_s, p.n_i, p.c_c, p.a_cc, 0.0, 0.0, 0.0, 0.0);
  CHECK(inv.pair_rate == doctest::Approx(1e6).epsilon(1e-9));
  CHECK(inv.eta_s == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(inv.eta_i == doctest::Approx(0.25).epsilon(1e-9));

  // full model round trip over random configurations
  Rng rng(404);
  for (int i = 0; i < 200; ++i) {
    SourceModel rm = random_model(rng);
    double power = rng.uniform_in(0.01, 10.0);
    auto pr = predict_counts(rm, power);
    double noise_s = rm.noise_coeff_s * power * rm.eta_s_r;
    double noise_i = rm.noise_coeff_i * power * rm.eta_i_r;
    auto rinv = invert_rates(pr.n_s, pr.n_i, pr.c_c, pr.a_cc, rm.dark_s, rm.dark_i,
                             noise_s, noise_i);
    CHECK(rinv.pair_rate == doctest::Approx(pr.pair_rate).epsilon(1e-9));
    CHECK(rinv.eta_s == doctest::Approx(rm.eta_s).epsilon(1e-9));
    CHECK(rinv.eta_i == doctest::Approx(rm.eta_i).epsilon(1e-9));
  }

  CHECK_THROWS_AS(invert_rates(1000.0, 1000.0, 0.3, 0.3, 0.0, 0.0, 0.0, 0.0),
                  std::domain_error);  // no coincidence excess
}

TEST_CASE("reference model hits its calibrated operating point") {
  SourceModel m = reference_source_model();
  m.validate();
  auto p = predict_counts(m, 0.273);
  CHECK(p.pair_rate == doctest::Approx(52300.0).epsilon(1e-9));
  CHECK(car(p.c_c, p.a_cc) == doctest::Approx(52600.0).epsilon(1e-9));
  CHECK(m.eta_s == doctest::Approx(0.27).epsilon(1e-12));
  CHECK(m.eta_i == doctest::Approx(0.23).epsilon(1e-12));

  // the inversion recovers the calibrated efficiencies from the rates
  double noise_s = m.noise_coeff_s * 0.273 * m.eta_s_r;
  double noise_i = m.noise_coeff_i * 0.273 * m.eta_i_r;
  auto inv = invert_rates(p.n_s, p.n_i, p.c_c, p.a_cc, m.dark_s, m.dark_i, noise_s, noise_i);
  CHECK(inv.eta_s == doctest::Approx(0.27).epsilon(1e-9));
  CHECK(inv.eta_i == doctest::Approx(0.23).epsilon(1e-9));
}

TEST_CASE("model validation") {
  SourceModel m = reference_source_model();
  m.eta_s = 1.2;
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
  m = reference_source_model();
  m.window = 0.0;
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
  m = reference_source_model();
  m.pair_coeff = -1.0;
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
}

TEST_CASE("power sweep fitting") {
  std::vector<double> p, y;
  for (int i = 0; i < 12; ++i) {
    double x = 0.1 + 0.35 * i;
    p.push_back(x);
    y.push_back(2.0 * x * x + 3.0 * x + 1.0);
  }
  auto fit = fit_power_sweep(p, y, 2);
  CHECK(fit.coeffs(0) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(fit.coeffs(1) == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(fit.coeffs(2) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(fit.rss < 1e-12);
  CHECK(fit.nonneg_over_range);

  // a pure linear-noise channel carries no quadratic component
  SourceModel noise_only;
  noise_only.noise_coeff_s = 8e3;
  noise_only.eta_s_r = 0.4;
  noise_only.dark_s = 150.0;
  noise_only.window = 300e-12;
  std::vector<double> yn;
  for (double x : p) yn.push_back(predict_counts(noise_only, x).n_s);
  auto nfit = fit_power_sweep(p, yn, 2);
  CHECK(std::abs(nfit.coeffs(0)) < 1e-6 * nfit.coeffs(1));
  CHECK(nfit.coeffs(1) == doctest::Approx(8e3 * 0.4).epsilon(1e-9));

  CHECK_THROWS_AS(fit_power_sweep({1.0}, {2.0}, 1), std::invalid_argument);
  CHECK_THROWS_AS(fit_power_sweep({1.0, 1.0, 1.0, 1.0}, {1.0, 2.0, 3.0, 4.0}, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(fit_power_sweep(p, y, 3), std::invalid_argument);
}

TEST_CASE("noise solver matches its target") {
  double noise = solve_noise_for_car(52300.0, 0.27, 0.23, 150.0, 150.0, 300e-12, 52600.0);
  CHECK(noise >= 0.0);
  SourceModel m;
  m.pair_coeff = 52300.0 / (0.273 * 0.273);
  m.eta_s = 0.27;
  m.eta_i = 0.23;
  m.eta_s_r = 1.0;
  m.eta_i_r = 1.0;
  m.noise_coeff_s = noise / 0.273;
  m.noise_coeff_i = noise / 0.273;
  m.dark_s = m.dark_i = 150.0;
  m.window = 300e-12;
  auto p = predict_counts(m, 0.273);
  CHECK(car(p.c_c, p.a_cc) == doctest::Approx(52600.0).epsilon(1e-9));
  CHECK_THROWS_AS(solve_noise_for_car(52300.0, 0.27, 0.23, 150.0, 150.0, 300e-12, 0.5),
                  std::domain_error);
}

TEST_SUITE_END();

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "core/estimators.hpp"
#include "core/rng.hpp"

using namespace paircraft;

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

std::vector<double> cosine_curve(const std::vector<double>& x, double c0, double v,
                                 double k, double phi) {
  std::vector<double> y;
  y.reserve(x.size());
  for (double xi : x) y.push_back(c0 * (1.0 + v * std::cos(k * xi + phi)));
  return y;
}

std::vector<double> beating_curve(const std::vector<double>& t, double c0, double v,
                                  double omega, double dw, double phi, double tau0) {
  std::vector<double> y;
  y.reserve(t.size());
  for (double ti : t) {
    double u = ti - tau0;
    y.push_back(c0 * (1.0 - v * sinc(omega * u) * std::cos(dw * u + phi)));
  }
  return y;
}

// reference scan parameters: envelope 2*pi*116.4 GHz, beat 2.220e12, scanned
// over +-30 ps in quarter-ps steps
const double kOmegaEnv = 2.0 * M_PI * 116.4e9;
const double kBeat = 2.220e12;

}  // namespace

TEST_SUITE_BEGIN("estimators");

TEST_CASE("sinc convention") {
  CHECK(sinc(0.0) == 1.0);
  CHECK(sinc(M_PI) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sinc(1.0) == doctest::Approx(std::sin(1.0)).epsilon(1e-15));
  CHECK(sinc(-2.0) == sinc(2.0));
}

TEST_CASE("cosine fit recovers exact parameters") {
  auto x = linspace(0.0, 4.0 * M_PI, 50);
  auto y = cosine_curve(x, 100.0, 0.9, 1.0, 0.3);

  auto fixed = fit_cosine(x, y, 1.0);
  CHECK(fixed.c0 == doctest::Approx(100.0).epsilon(1e-6));
  CHECK(fixed.visibility == doctest::Approx(0.9).epsilon(1e-6));
  CHECK(fixed.phase0 == doctest::Approx(0.3).epsilon(1e-6));
  CHECK(fixed.period_fixed);
  CHECK(fixed.chi2 < 1e-10);

  auto free = fit_cosine(x, y);
  CHECK_FALSE(free.period_fixed);
  CHECK(free.period_k == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(free.visibility == doctest::Approx(0.9).epsilon(1e-6));
}

TEST_CASE("cosine fit is scale invariant in shape") {
  auto x = linspace(0.0, 2.0 * M_PI, 40);
  auto y = cosine_curve(x, 80.0, 0.65, 1.0, -1.1);
  auto base = fit_cosine(x, y, 1.0);
  std::vector<double> scaled;
  for (double v : y) scaled.push_back(7.5 * v);
  auto big = fit_cosine(x, scaled, 1.0);
  CHECK(big.c0 == doctest::Approx(7.5 * base.c0).epsilon(1e-9));
  CHECK(big.visibility == doctest::Approx(base.visibility).epsilon(1e-9));
  CHECK(big.phase0 == doctest::Approx(base.phase0).epsilon(1e-9));
}

TEST_CASE("constant data fits with zero visibility") {
  auto x = linspace(0.0, 2.0 * M_PI, 24);
  std::vector<double> y(x.size(), 55.0);
  auto fit = fit_cosine(x, y, 1.0);
  CHECK(fit.c0 == doctest::Approx(55.0).epsilon(1e-9));
  CHECK(fit.visibility <= 1e-9);
}

TEST_CASE("cosine fit input validation") {
  auto x = linspace(0.0, 2.0 * M_PI, 24);
  auto y = cosine_curve(x, 10.0, 0.5, 1.0, 0.0);
  CHECK_THROWS_AS(fit_cosine({0.0, 1.0}, {1.0, 2.0}), std::invalid_argument);
  auto bad = y;
  bad[3] = -2.0;
  CHECK_THROWS_AS(fit_cosine(x, bad, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(fit_cosine(x, y, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(fit_cosine(std::vector<double>(24, 1.0), y, 1.0), std::invalid_argument);
}

TEST_CASE("noisy fringe recovers the generating visibility") {
  auto x = linspace(0.0, 2.0 * M_PI, 36);
  auto clean = cosine_curve(x, 2500.0, 0.9175, 1.0, 0.4);
  Rng rng(7127);
  std::vector<double> y;
  for (double v : clean) y.push_back(static_cast<double>(rng.poisson(v)));

  auto fit = fit_cosine(x, y, 1.0);
  auto sig = bootstrap_sigma_cosine(x, y, 1.0, 200, 99);
  REQUIRE(sig.size() == 4);
  CHECK(sig[3] == 0.0);  // fixed period carries no uncertainty
  CHECK(std::abs(fit.visibility - 0.9175) < 3.0 * sig[1]);
  // Poisson count scale ~2500/point puts sigma_V around half a percent
  CHECK(sig[1] > 1e-4);
  CHECK(sig[1] < 0.05);
}

TEST_CASE("beating fit recovers exact parameters") {
  auto t = linspace(-30e-12, 30e-12, 241);
  auto y = beating_curve(t, 300.0, 0.9685, kOmegaEnv, kBeat, 0.182, 0.0);
  auto fit = fit_beating(t, y);
  CHECK(fit.c0 == doctest::Approx(300.0).epsilon(1e-4));
  CHECK(fit.visibility == doctest::Approx(0.9685).epsilon(1e-4));
  CHECK(fit.omega_env == doctest::Approx(kOmegaEnv).epsilon(1e-4));
  CHECK(fit.delta_omega == doctest::Approx(kBeat).epsilon(1e-4));
  CHECK(fit.phi == doctest::Approx(0.182).epsilon(1e-3));
  CHECK(std::abs(fit.tau0) < 1e-13);
}

TEST_CASE("beating fit with poisson noise stays within bootstrap bands") {
  auto t = linspace(-30e-12, 30e-12, 241);
  auto clean = beating_curve(t, 300.0, 0.9685, kOmegaEnv, kBeat, 0.182, 0.0);
  Rng rng(2026);
  std::vector<double> y;
  for (double v : clean) y.push_back(static_cast<double>(rng.poisson(v)));

  auto fit = fit_beating(t, y);
  auto sig = bootstrap_sigma_beating(t, y, 60, 31);
  REQUIRE(sig.size() == 6);
  CHECK(std::abs(fit.visibility - 0.9685) < 3.0 * sig[1]);
  CHECK(std::abs(fit.omega_env - kOmegaEnv) < 3.0 * sig[2]);
  CHECK(std::abs(fit.delta_omega - kBeat) < 3.0 * sig[3]);
  double dphi = std::remainder(fit.phi - 0.182, 2.0 * M_PI);
  CHECK(std::abs(dphi) < 3.0 * sig[4]);
}

TEST_CASE("flat data leaves the envelope unidentified") {
  auto t = linspace(-30e-12, 30e-12, 121);
  std::vector<double> y(t.size(), 240.0);
  auto fit = fit_beating(t, y);
  CHECK(fit.visibility <= 1e-6);
  // no meaningful confidence on the envelope width: the degenerate direction
  // is either dropped by the pseudo-inverse (0) or blows up
  double var = fit.covariance(2, 2);
  CHECK((var == 0.0 || !(std::sqrt(var) < 0.1 * std::abs(fit.omega_env))));
}

TEST_CASE("undersampled beat is rejected") {
  // 2 ps steps put the sampling limit at 1.57e12 rad/s; a beat hugging that
  // limit is flagged instead of being fitted
  auto t = linspace(-30e-12, 30e-12, 31);
  auto y = beating_curve(t, 300.0, 0.9685, kOmegaEnv, 1.49e12, 0.0, 0.0);
  CHECK_THROWS_WITH_AS(fit_beating(t, y), doctest::Contains("sampl"), std::runtime_error);
}

TEST_CASE("bootstrap is deterministic and reports failures") {
  auto x = linspace(0.0, 2.0 * M_PI, 30);
  auto y = cosine_curve(x, 900.0, 0.8, 1.0, 0.2);
  auto s1 = bootstrap_sigma_cosine(x, y, 1.0, 100, 5);
  auto s2 = bootstrap_sigma_cosine(x, y, 1.0, 100, 5);
  CHECK(s1 == s2);
  auto s3 = bootstrap_sigma_cosine(x, y, 1.0, 100, 6);
  CHECK(s1 != s3);
  // noiseless input still yields non-zero resampling spread
  CHECK(s1[0] > 0.0);
  CHECK(s1[1] > 0.0);

  // a fit that rejects half its resamples trips the failure gate
  auto flaky = [](const std::vector<double>&, const std::vector<double>& yy) {
    if (static_cast<long long>(yy.at(0)) % 2 == 1)
      throw std::runtime_error("synthetic failure");
    Eigen::VectorXd p(1);
    p << yy.at(0);
    return p;
  };
  CHECK_THROWS_WITH_AS(bootstrap_sigma(flaky, x, y, 100, 11), doctest::Contains("resample"),
                       std::runtime_error);
}

TEST_CASE("correlation coefficient") {
  double n = 1200.0, v = 0.9175;
  std::array<double, 4> counts = {n * (1 + v), n * (1 - v), n * (1 - v), n * (1 + v)};
  CHECK(correlation_coefficient(counts) == doctest::Approx(v).epsilon(1e-12));
  CHECK(correlation_coefficient({5.0, 5.0, 5.0, 5.0}) == 0.0);
  CHECK(correlation_coefficient({0.0, 3.0, 3.0, 0.0}) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK_THROWS_AS(correlation_coefficient({0.0, 0.0, 0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(correlation_coefficient({1.0, -1.0, 1.0, 1.0}), std::invalid_argument);

  // scaling all four counts cancels out
  std::array<double, 4> scaled;
  for (int i = 0; i < 4; ++i) scaled[i] = 13.7 * counts[i];
  CHECK(correlation_coefficient(scaled) ==
        doctest::Approx(correlation_coefficient(counts)).epsilon(1e-12));
}

TEST_CASE("fitted fringes assemble into the expected correlation curve") {
  // four analyzer pairs with alternating signs, equal baselines
  double v = 0.93, c0 = 4000.0;
  auto x = linspace(0.0, 2.0 * M_PI, 48);
  std::array<FringeFit, 4> fits = {
      fit_cosine(x, cosine_curve(x, c0, v, 1.0, 0.0), 1.0),
      fit_cosine(x, cosine_curve(x, c0, v, 1.0, M_PI), 1.0),
      fit_cosine(x, cosine_curve(x, c0, v, 1.0, M_PI), 1.0),
      fit_cosine(x, cosine_curve(x, c0, v, 1.0, 0.0), 1.0),
  };
  for (double phase : {0.0, 0.7, 2.0}) {
    std::array<double, 4> r;
    for (int i = 0; i < 4; ++i) {
      const auto& f = fits[i];
      r[i] = f.c0 * (1.0 + f.visibility * std::cos(f.period_k * phase + f.phase0));
    }
    CHECK(correlation_coefficient(r) == doctest::Approx(v * std::cos(phase)).epsilon(1e-6));
  }
}

TEST_CASE("estimates sharpen as counts grow") {
  auto x = linspace(0.0, 2.0 * M_PI, 36);
  double prev_err = 1e9;
  for (double scale : {300.0, 3000.0, 30000.0}) {
    Rng rng(515 + static_cast<uint64_t>(scale));
    std::vector<double> y;
    for (double v : cosine_curve(x, scale, 0.9, 1.0, 0.5))
      y.push_back(static_cast<double>(rng.poisson(v)));
    auto fit = fit_cosine(x, y, 1.0);
    double err = std::abs(fit.visibility - 0.9);
    CHECK(err < prev_err + 2.0 / std::sqrt(scale));  // allow statistical wiggle
    prev_err = err;
  }
  CHECK(prev_err < 0.01);
}

TEST_SUITE_END();

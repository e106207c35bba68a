#include "core/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "core/rng.hpp"

namespace paircraft {

double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

namespace {

// d/dx sinc(x) = (x cos x - sin x) / x^2, -> -x/3 near 0.
double dsinc(double x) {
  if (std::abs(x) < 1e-6) return -x / 3.0;
  return (x * std::cos(x) - std::sin(x)) / (x * x);
}

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * M_PI);
  if (a <= -M_PI) a += 2.0 * M_PI;
  if (a > M_PI) a -= 2.0 * M_PI;
  return a;
}

struct LmResult {
  Eigen::VectorXd params;
  Eigen::MatrixXd covariance;
  double chi2 = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Weighted residuals r and Jacobian J = dr/dp are filled by `eval`.
using LmEval = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&, Eigen::MatrixXd&)>;

constexpr int kMaxIterations = 400;
constexpr double kGradientTol = 1e-10;

LmResult levenberg_fit(const LmEval& eval, Eigen::VectorXd p, int n_residuals) {
  const int n_params = static_cast<int>(p.size());
  Eigen::VectorXd r(n_residuals);
  Eigen::MatrixXd J(n_residuals, n_params);
  eval(p, r, J);
  double chi2 = r.squaredNorm();
  double lambda = 1e-3;

  // Parameters can mix units whose scales differ by tens of orders of
  // magnitude (a delay in seconds against a splitting in rad/s), which makes
  // the raw normal equations numerically singular in double precision: the
  // factorisation wipes out the small-pivot directions and the fit silently
  // stops moving along them.  Equilibrate by the Jacobian column norms and
  // solve in scaled parameters throughout.
  auto scales_of = [n_params](const Eigen::MatrixXd& Jm) {
    Eigen::VectorXd s(n_params);
    for (int j = 0; j < n_params; ++j) {
      double nrm = Jm.col(j).norm();
      s(j) = nrm > 0.0 ? nrm : 1.0;
    }
    return s;
  };
  auto equilibrated = [n_params](const Eigen::MatrixXd& Jm, const Eigen::VectorXd& s) {
    Eigen::MatrixXd Js = Jm;
    for (int j = 0; j < n_params; ++j) Js.col(j) /= s(j);
    return Js;
  };

  LmResult out;
  int iter = 0;
  for (; iter < kMaxIterations; ++iter) {
    Eigen::VectorXd scale = scales_of(J);
    Eigen::MatrixXd Js = equilibrated(J, scale);
    Eigen::MatrixXd JtJ = Js.transpose() * Js;
    Eigen::VectorXd g = Js.transpose() * r;
    if (g.lpNorm<Eigen::Infinity>() < kGradientTol * std::max(1.0, chi2)) {
      out.converged = true;
      break;
    }
    Eigen::MatrixXd damped = JtJ;
    damped.diagonal() += lambda * JtJ.diagonal().cwiseMax(1e-12);
    Eigen::VectorXd step = damped.ldlt().solve(-g);
    step.array() /= scale.array();
    Eigen::VectorXd p_try = p + step;
    Eigen::VectorXd r_try(n_residuals);
    Eigen::MatrixXd J_try(n_residuals, n_params);
    eval(p_try, r_try, J_try);
    double chi2_try = r_try.squaredNorm();
    if (std::isfinite(chi2_try) && chi2_try < chi2) {
      double drop = chi2 - chi2_try;
      p = p_try;
      r = r_try;
      J = J_try;
      chi2 = chi2_try;
      lambda = std::max(lambda * 0.3, 1e-12);
      if (drop < 1e-14 * std::max(1.0, chi2)) {
        out.converged = true;
        ++iter;
        break;
      }
    } else {
      lambda *= 10.0;
      if (lambda > 1e12) break;  // stuck; staleness test below decides
    }
  }
  Eigen::VectorXd scale = scales_of(J);
  Eigen::MatrixXd Js = equilibrated(J, scale);
  Eigen::MatrixXd JtJ = Js.transpose() * Js;
  if (!out.converged) {
    // Judge staleness by the chi^2 decrease a full Gauss-Newton step could
    // still buy, g^T (J^T J)^+ g, which is invariant under reparameterisation
    // and immune to the noise floor a gradient norm sits on.  Anything well
    // below the delta-chi^2 = 1 confidence quantum cannot move a parameter
    // by a meaningful fraction of its own uncertainty, so a large-residual
    // fit that inches along a sloppy direction still counts as done.
    Eigen::VectorXd g = Js.transpose() * r;
    Eigen::MatrixXd damped = JtJ;
    damped.diagonal() += 1e-12 * JtJ.diagonal().cwiseMax(1e-12);
    double headroom = g.dot(damped.ldlt().solve(g));
    if (std::isfinite(headroom) && headroom < std::max(0.05, 1e-6 * chi2))
      out.converged = true;
  }
  out.params = p;
  out.chi2 = chi2;
  out.iterations = iter;

  // Covariance from the pseudo-inverse of J^T J at the solution (computed in
  // the scaled parameters, then mapped back); weighted residuals make this
  // the Poisson-error parameter covariance directly.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(JtJ, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  double cutoff = sv.size() ? sv(0) * 1e-12 : 0.0;
  Eigen::VectorXd inv_sv = sv;
  for (int i = 0; i < sv.size(); ++i) inv_sv(i) = sv(i) > cutoff ? 1.0 / sv(i) : 0.0;
  out.covariance = svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().transpose();
  for (int i = 0; i < n_params; ++i)
    for (int j = 0; j < n_params; ++j) out.covariance(i, j) /= scale(i) * scale(j);
  return out;
}

void check_xy(const std::vector<double>& x, const std::vector<double>& y,
              std::size_t min_points, const char* what) {
  if (x.size() != y.size())
    throw std::invalid_argument(std::string(what) + ": x and y lengths differ");
  if (x.size() < min_points)
    throw std::invalid_argument(std::string(what) + ": need at least " +
                                std::to_string(min_points) + " points");
  for (double v : x)
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite x");
  for (double v : y)
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite y");
}

std::vector<double> poisson_sigmas(const std::vector<double>& y) {
  std::vector<double> s(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) s[i] = y[i] > 0.0 ? std::sqrt(y[i]) : 1.0;
  return s;
}

// Best-fit (a, b) for y/c0 - 1 = a cos(kx) + b sin(kx), returning the
// weighted residual. Used both for phase initialisation and the k scan.
double cosine_linear_init(const std::vector<double>& x, const std::vector<double>& y,
                          const std::vector<double>& sig, double c0, double k,
                          double* a_out, double* b_out) {
  double Scc = 0, Sss = 0, Scs = 0, Syc = 0, Sys = 0, Syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double w = 1.0 / (sig[i] * sig[i]);
    double c = std::cos(k * x[i]), s = std::sin(k * x[i]);
    double z = y[i] / c0 - 1.0;
    Scc += w * c * c;
    Sss += w * s * s;
    Scs += w * c * s;
    Syc += w * z * c;
    Sys += w * z * s;
    Syy += w * z * z;
  }
  double det = Scc * Sss - Scs * Scs;
  double a = 0, b = 0;
  if (std::abs(det) > 1e-30) {
    a = (Syc * Sss - Sys * Scs) / det;
    b = (Sys * Scc - Syc * Scs) / det;
  }
  if (a_out) *a_out = a;
  if (b_out) *b_out = b;
  return Syy - 2 * (a * Syc + b * Sys) + a * a * Scc + b * b * Sss + 2 * a * b * Scs;
}

// Same linear subproblem with a sinc envelope folded into the basis:
// y/c0 - 1 = sinc(W (t - tau0)) (a cos(kt) + b sin(kt)).  Used to locate the
// beat frequency once a width/centre guess exists; the plain-cosine scan
// above cannot do that, because under an envelope its response is a shelf of
// near-equal minima spaced 2 pi / span.
double beating_linear_init(const std::vector<double>& x, const std::vector<double>& y,
                           const std::vector<double>& sig, double c0, double env_w,
                           double tau0, double k, double* a_out, double* b_out) {
  double Scc = 0, Sss = 0, Scs = 0, Syc = 0, Sys = 0, Syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double w = 1.0 / (sig[i] * sig[i]);
    double e = sinc(env_w * (x[i] - tau0));
    double c = e * std::cos(k * x[i]), s = e * std::sin(k * x[i]);
    double z = y[i] / c0 - 1.0;
    Scc += w * c * c;
    Sss += w * s * s;
    Scs += w * c * s;
    Syc += w * z * c;
    Sys += w * z * s;
    Syy += w * z * z;
  }
  double det = Scc * Sss - Scs * Scs;
  double a = 0, b = 0;
  if (std::abs(det) > 1e-30) {
    a = (Syc * Sss - Sys * Scs) / det;
    b = (Sys * Scc - Syc * Scs) / det;
  }
  if (a_out) *a_out = a;
  if (b_out) *b_out = b;
  return Syy - 2 * (a * Syc + b * Sys) + a * a * Scc + b * b * Sss + 2 * a * b * Scs;
}

double median_spacing(const std::vector<double>& x) {
  std::vector<double> xs(x);
  std::sort(xs.begin(), xs.end());
  std::vector<double> d;
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (xs[i] > xs[i - 1]) d.push_back(xs[i] - xs[i - 1]);
  if (d.empty()) throw std::invalid_argument("fit: all x values identical");
  std::nth_element(d.begin(), d.begin() + d.size() / 2, d.end());
  return d[d.size() / 2];
}

// Residuals and Jacobian of c0 (1 - V sinc(W (t - tau0)) cos(D (t - tau0) + phi))
// against Poisson-weighted counts; parameter order (c0, V, W, D, phi, tau0).
LmEval beating_eval(std::vector<double> t, std::vector<double> y,
                    std::vector<double> sig) {
  const int n = static_cast<int>(t.size());
  return [t = std::move(t), y = std::move(y), sig = std::move(sig), n](
             const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd& J) {
    double C0 = p(0), V = p(1), W = p(2), D = p(3), ph = p(4), T0 = p(5);
    for (int i = 0; i < n; ++i) {
      double u = t[i] - T0;
      double zw = W * u;
      double s = sinc(zw), sp = dsinc(zw);
      double arg = D * u + ph;
      double c = std::cos(arg), sn = std::sin(arg);
      double w = 1.0 / sig[i];
      r(i) = (C0 * (1.0 - V * s * c) - y[i]) * w;
      J(i, 0) = (1.0 - V * s * c) * w;
      J(i, 1) = -C0 * s * c * w;
      J(i, 2) = -C0 * V * c * sp * u * w;
      J(i, 3) = C0 * V * s * sn * u * w;
      J(i, 4) = C0 * V * s * sn * w;
      J(i, 5) = C0 * V * (c * sp * W + s * sn * D) * w;
    }
  };
}

// Fold a converged solution into the canonical sign and phase conventions.
BeatingFit beating_result(const LmResult& lm) {
  BeatingFit out;
  out.c0 = lm.params(0);
  out.visibility = lm.params(1);
  out.omega_env = lm.params(2);
  out.delta_omega = lm.params(3);
  out.phi = lm.params(4);
  out.tau0 = lm.params(5);
  out.covariance = lm.covariance;
  out.chi2 = lm.chi2;
  out.iterations = lm.iterations;
  if (out.visibility < 0.0) {
    out.visibility = -out.visibility;
    out.phi += M_PI;
  }
  if (out.omega_env < 0.0) out.omega_env = -out.omega_env;  // sinc is even
  if (out.delta_omega < 0.0) {                              // cos(-x) = cos(x)
    out.delta_omega = -out.delta_omega;
    out.phi = -out.phi;
  }
  out.phi = wrap_angle(out.phi);
  if (out.c0 < 0.0)
    throw std::runtime_error("fit_beating: converged to a negative baseline");
  return out;
}

}  // namespace

FringeFit fit_cosine(const std::vector<double>& x, const std::vector<double>& y,
                     std::optional<double> fixed_k) {
  bool k_fixed = fixed_k.has_value();
  check_xy(x, y, k_fixed ? 4 : 5, "fit_cosine");
  for (double v : y)
    if (v < 0.0) throw std::invalid_argument("fit_cosine: negative count value");
  auto sig = poisson_sigmas(y);

  double c0 = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  if (c0 <= 0.0) c0 = 1.0;

  auto [xmin_it, xmax_it] = std::minmax_element(x.begin(), x.end());
  double span = *xmax_it - *xmin_it;
  if (span <= 0.0) throw std::invalid_argument("fit_cosine: zero x span");

  double k0;
  if (k_fixed) {
    k0 = *fixed_k;
    if (!(k0 > 0.0)) throw std::invalid_argument("fit_cosine: fixed period must be positive");
  } else {
    // Coarse scan: linear LS residual as a function of k (a periodogram with
    // the exact weighting the fit uses).
    double k_lo = 0.5 * 2.0 * M_PI / span;
    double k_hi = 0.95 * M_PI / median_spacing(x);
    if (k_hi <= k_lo) k_hi = 4.0 * k_lo;
    int n_scan = 512;
    double best = std::numeric_limits<double>::infinity();
    k0 = k_lo;
    for (int i = 0; i <= n_scan; ++i) {
      double k = k_lo + (k_hi - k_lo) * i / n_scan;
      double res = cosine_linear_init(x, y, sig, c0, k, nullptr, nullptr);
      if (res < best) {
        best = res;
        k0 = k;
      }
    }
  }
  double a, b;
  cosine_linear_init(x, y, sig, c0, k0, &a, &b);
  double v0 = std::clamp(std::hypot(a, b), 1e-6, 2.0);
  double phi0 = std::atan2(-b, a);

  const int n = static_cast<int>(x.size());
  const int np = k_fixed ? 3 : 4;
  auto eval = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd& J) {
    double C0 = p(0), V = p(1), ph = p(2), K = k_fixed ? k0 : p(3);
    for (int i = 0; i < n; ++i) {
      double arg = K * x[i] + ph;
      double c = std::cos(arg), s = std::sin(arg);
      double w = 1.0 / sig[i];
      r(i) = (C0 * (1.0 + V * c) - y[i]) * w;
      J(i, 0) = (1.0 + V * c) * w;
      J(i, 1) = C0 * c * w;
      J(i, 2) = -C0 * V * s * w;
      if (!k_fixed) J(i, 3) = -C0 * V * s * x[i] * w;
    }
  };
  Eigen::VectorXd p0(np);
  p0(0) = c0;
  p0(1) = v0;
  p0(2) = phi0;
  if (!k_fixed) p0(3) = k0;
  LmResult lm = levenberg_fit(eval, p0, n);
  if (!lm.converged) {
    std::ostringstream msg;
    msg << "fit_cosine failed to converge: chi2=" << lm.chi2
        << " after " << lm.iterations << " iterations";
    throw std::runtime_error(msg.str());
  }

  FringeFit out;
  out.c0 = lm.params(0);
  out.visibility = lm.params(1);
  out.phase0 = lm.params(2);
  out.period_k = k_fixed ? k0 : lm.params(3);
  out.period_fixed = k_fixed;
  out.covariance = lm.covariance;
  out.chi2 = lm.chi2;
  out.iterations = lm.iterations;
  if (out.visibility < 0.0) {  // absorb the sign into the phase
    out.visibility = -out.visibility;
    out.phase0 += M_PI;
  }
  out.phase0 = wrap_angle(out.phase0);
  if (out.c0 < 0.0)
    throw std::runtime_error("fit_cosine: converged to a negative baseline");
  return out;
}

BeatingFit fit_beating(const std::vector<double>& t, const std::vector<double>& y) {
  check_xy(t, y, 8, "fit_beating");
  for (double v : y)
    if (v < 0.0) throw std::invalid_argument("fit_beating: negative count value");
  auto sig = poisson_sigmas(y);
  const int n = static_cast<int>(t.size());

  auto [tmin_it, tmax_it] = std::minmax_element(t.begin(), t.end());
  double span = *tmax_it - *tmin_it;
  if (span <= 0.0) throw std::invalid_argument("fit_beating: zero t span");
  double dt = median_spacing(t);
  double nyquist = M_PI / dt;

  // Baseline from the outer quarter of the scan, where the envelope has died.
  std::vector<std::size_t> order(t.size());
  std::iota(order.begin(), order.end(), 0u);
  double t_mid = 0.5 * (*tmin_it + *tmax_it);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return std::abs(t[i] - t_mid) > std::abs(t[j] - t_mid);
  });
  std::size_t n_tail = std::max<std::size_t>(2, t.size() / 4);
  double c0 = 0.0;
  for (std::size_t i = 0; i < n_tail; ++i) c0 += y[order[i]];
  c0 /= static_cast<double>(n_tail);
  if (c0 <= 0.0) c0 = std::max(1e-12, *std::max_element(y.begin(), y.end()));

  // Beat frequency from a coarse weighted periodogram of y - c0; also the
  // sampling guard: a peak hugging the Nyquist limit means the oscillation
  // is not resolved and the fitted frequency would be meaningless.
  double k_lo = 2.0 * M_PI / span;
  double k_hi = 0.98 * nyquist;
  int n_scan = 1024;
  double best = std::numeric_limits<double>::infinity();
  double dw0 = k_lo;
  for (int i = 0; i <= n_scan; ++i) {
    double k = k_lo + (k_hi - k_lo) * i / n_scan;
    double res = cosine_linear_init(t, y, sig, c0, k, nullptr, nullptr);
    if (res < best) {
      best = res;
      dw0 = k;
    }
  }
  if (dw0 > 0.9 * nyquist) {
    std::ostringstream msg;
    msg << "fit_beating: dominant modulation at " << dw0
        << " rad/s is too close to the sampling limit " << nyquist
        << " rad/s; the beat is not adequately sampled";
    throw std::runtime_error(msg.str());
  }

  // Envelope centre: extremal smoothed deviation from the baseline.
  double tau0_init = t_mid;
  double best_dev = -1.0;
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    int m = 0;
    for (int j = std::max(0, i - 2); j <= std::min(n - 1, i + 2); ++j, ++m)
      acc += std::abs(y[j] - c0);
    acc /= std::max(1, m);
    if (acc > best_dev) {
      best_dev = acc;
      tau0_init = t[i];
    }
  }

  LmEval eval = beating_eval(t, y, sig);

  // The envelope width is poorly constrained before the fit, so work through
  // a ladder of candidate widths.
  std::vector<double> omega_starts;
  for (double m : {6.0, 12.0, 24.0, 48.0}) omega_starts.push_back(m / span);

  LmResult best_lm;
  best_lm.chi2 = std::numeric_limits<double>::infinity();
  bool any = false;
  int tried = 0;
  auto try_start = [&](double v0s, double w0s, double k0s, double ph0s) {
    Eigen::VectorXd p0(6);
    p0 << c0, v0s, w0s, k0s, ph0s, tau0_init;
    ++tried;
    LmResult lm = levenberg_fit(eval, p0, n);
    if (lm.converged && lm.chi2 < best_lm.chi2) {
      best_lm = lm;
      any = true;
    }
  };

  // The coarse scan locates the beat only to within the envelope bandwidth
  // (its plain-cosine response under the envelope is a shelf of near-equal
  // minima spaced 2 pi / span, freely reordered by noise).  Re-scan around it
  // with the envelope folded in, which collapses the shelf to a sharp
  // minimum, and seed the fit from the best few distinct frequencies; the
  // quadrature amplitudes of the winning seed give the starting visibility
  // and phase directly.
  double k_bar = 2.0 * M_PI / span;
  double k_win = std::max(1.5 * omega_starts.back(), 8.0 * k_bar);
  double fine_lo = std::max(k_lo, dw0 - k_win);
  double fine_hi = std::min(0.9 * nyquist, dw0 + k_win);
  struct Seed {
    double res, w, k, a, b;
  };
  std::vector<Seed> seeds;
  int n_fine = std::max(16, static_cast<int>(std::ceil((fine_hi - fine_lo) / (k_bar / 8.0))));
  for (double w0 : omega_starts) {
    for (int i = 0; i <= n_fine; ++i) {
      double k = fine_lo + (fine_hi - fine_lo) * i / n_fine;
      double a, b;
      double res = beating_linear_init(t, y, sig, c0, w0, tau0_init, k, &a, &b);
      seeds.push_back({res, w0, k, a, b});
    }
  }
  std::sort(seeds.begin(), seeds.end(),
            [](const Seed& p, const Seed& q) { return p.res < q.res; });
  std::vector<double> taken;
  for (const Seed& s : seeds) {
    if (taken.size() == 3) break;
    bool close = false;
    for (double k : taken) close = close || std::abs(k - s.k) < k_bar;
    if (close) continue;
    taken.push_back(s.k);
    // y/c0 - 1 = sinc (a cos kt + b sin kt) against the fitted form
    // -V sinc cos(k (t - tau0) + phi + k tau0):
    double v0s = std::clamp(std::hypot(s.a, s.b), 0.05, 2.0);
    double ph0s = std::atan2(s.b, -s.a) + s.k * tau0_init;
    try_start(v0s, s.w, s.k, ph0s);
  }

  // Fallback ladder over both phase branches, from the coarse-scan frequency.
  if (!any)
    for (double w0 : omega_starts)
      for (double ph0 : {0.0, M_PI}) try_start(0.8, w0, dw0, ph0);

  if (!any) {
    std::ostringstream msg;
    msg << "fit_beating failed to converge from " << tried
        << " starting points (best chi2=" << best_lm.chi2 << ")";
    throw std::runtime_error(msg.str());
  }

  return beating_result(best_lm);
}

std::vector<double> bootstrap_sigma(
    const std::function<Eigen::VectorXd(const std::vector<double>&, const std::vector<double>&)>& fit,
    const std::vector<double>& x, const std::vector<double>& y,
    int n_resamples, uint64_t seed) {
  if (n_resamples < 2) throw std::invalid_argument("bootstrap_sigma: need at least 2 resamples");
  Rng rng(seed);
  std::vector<Eigen::VectorXd> samples;
  int failures = 0;
  for (int k = 0; k < n_resamples; ++k) {
    Rng sub = rng.fork(static_cast<uint64_t>(k) + 1);
    std::vector<double> yk(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
      yk[i] = y[i] > 0.0 ? static_cast<double>(sub.poisson(y[i])) : 0.0;
    try {
      samples.push_back(fit(x, yk));
    } catch (const std::exception&) {
      ++failures;
    }
  }
  if (failures * 5 > n_resamples) {
    std::ostringstream msg;
    msg << "bootstrap_sigma: " << failures << " of " << n_resamples
        << " resample fits failed";
    throw std::runtime_error(msg.str());
  }
  if (samples.size() < 2)
    throw std::runtime_error("bootstrap_sigma: too few successful resamples");
  const int np = static_cast<int>(samples.front().size());
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(np);
  for (const auto& s : samples) mean += s;
  mean /= static_cast<double>(samples.size());
  Eigen::VectorXd var = Eigen::VectorXd::Zero(np);
  for (const auto& s : samples) var += (s - mean).cwiseAbs2();
  var /= static_cast<double>(samples.size() - 1);
  std::vector<double> out(np);
  for (int i = 0; i < np; ++i) out[i] = std::sqrt(var(i));
  return out;
}

namespace {

double align_phase(double phi, double reference) {
  double d = phi - reference;
  return reference + wrap_angle(d);
}

// Refit a Poisson resample starting from an already-converged solution.  The
// resampled minimum sits within a few sigma of the seeding one, so the
// frequency scans and the start ladder of the cold fit are redundant; if the
// single warm fit still fails, fall back to the full search.
BeatingFit fit_beating_warm(const std::vector<double>& t,
                            const std::vector<double>& y,
                            const BeatingFit& seed) {
  auto sig = poisson_sigmas(y);
  LmEval eval = beating_eval(t, y, sig);
  Eigen::VectorXd p0(6);
  p0 << seed.c0, seed.visibility, seed.omega_env, seed.delta_omega, seed.phi,
      seed.tau0;
  LmResult lm = levenberg_fit(eval, p0, static_cast<int>(t.size()));
  if (lm.converged) return beating_result(lm);
  return fit_beating(t, y);
}

}  // namespace

std::vector<double> bootstrap_sigma_cosine(const std::vector<double>& x,
                                           const std::vector<double>& y,
                                           std::optional<double> fixed_k,
                                           int n_resamples, uint64_t seed) {
  FringeFit central = fit_cosine(x, y, fixed_k);
  auto refit = [&](const std::vector<double>& xs, const std::vector<double>& ys) {
    FringeFit f = fit_cosine(xs, ys, fixed_k);
    Eigen::VectorXd p(4);
    p << f.c0, f.visibility, align_phase(f.phase0, central.phase0), f.period_k;
    return p;
  };
  return bootstrap_sigma(refit, x, y, n_resamples, seed);
}

std::vector<double> bootstrap_sigma_beating(const std::vector<double>& t,
                                            const std::vector<double>& y,
                                            int n_resamples, uint64_t seed) {
  BeatingFit central = fit_beating(t, y);
  auto refit = [&](const std::vector<double>& ts, const std::vector<double>& ys) {
    BeatingFit f = fit_beating_warm(ts, ys, central);
    Eigen::VectorXd p(6);
    p << f.c0, f.visibility, f.omega_env, f.delta_omega,
        align_phase(f.phi, central.phi), f.tau0;
    return p;
  };
  return bootstrap_sigma(refit, t, y, n_resamples, seed);
}

double correlation_coefficient(const std::array<double, 4>& counts) {
  double sum = 0.0;
  for (double c : counts) {
    if (c < 0.0) throw std::invalid_argument("correlation_coefficient: negative count");
    if (!std::isfinite(c)) throw std::invalid_argument("correlation_coefficient: non-finite count");
    sum += c;
  }
  if (sum <= 0.0)
    throw std::invalid_argument("correlation_coefficient: all counts are zero");
  return (counts[0] - counts[1] - counts[2] + counts[3]) / sum;
}

}  // namespace paircraft

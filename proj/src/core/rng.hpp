#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace paircraft {

// Seeded RNG with hand-rolled samplers on top of mt19937_64 so that event
// streams are bit-identical for a given seed regardless of the standard
// library's distribution internals.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), gen_(seed) {}

  // uniform in [0, 1), 53-bit resolution
  double uniform() { return (gen_() >> 11) * 0x1.0p-53; }

  double uniform_in(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // exponential with the given rate (events per unit time)
  double exponential(double rate) {
    if (!(rate > 0)) throw std::invalid_argument("exponential rate must be positive");
    double u;
    do { u = uniform(); } while (u == 0.0);
    return -std::log(u) / rate;
  }

  // standard normal via the polar method
  double gaussian() {
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    return u * std::sqrt(-2.0 * std::log(s) / s);
  }

  double gaussian(double mean, double sigma) { return mean + sigma * gaussian(); }

  // Poisson sample; Knuth's product method, with exact halving for large means
  uint64_t poisson(double mean) {
    if (mean < 0) throw std::invalid_argument("poisson mean must be non-negative");
    if (mean == 0) return 0;
    if (mean > 30.0) return poisson(mean / 2) + poisson(mean - mean / 2);
    const double limit = std::exp(-mean);
    uint64_t k = 0;
    double prod = uniform();
    while (prod > limit) {
      ++k;
      prod *= uniform();
    }
    return k;
  }

  // index into a cumulative distribution (cdf ascending, last entry = total mass)
  size_t categorical(const std::vector<double>& cdf) {
    if (cdf.empty()) throw std::invalid_argument("empty cdf");
    const double u = uniform() * cdf.back();
    size_t lo = 0, hi = cdf.size() - 1;
    while (lo < hi) {
      size_t mid = (lo + hi) / 2;
      if (cdf[mid] <= u) lo = mid + 1; else hi = mid;
    }
    return lo;
  }

  // independent substream for a worker/resample index (splitmix64 of the seed)
  Rng fork(uint64_t stream) const {
    uint64_t z = seed_ + 0x9E3779B97F4A7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return Rng(z ^ (z >> 31));
  }

 private:
  uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace paircraft

#pragma once

// Seeded generators and small brute-force oracles shared by the tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "delone/exact.hpp"
#include "delone/geom.hpp"
#include "delone/pointset.hpp"

namespace testing {

using delone::cplx;
using delone::Gaussian;

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}

  std::int64_t integer(std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(eng); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng); }
  bool coin() { return integer(0, 1) == 1; }

  /// Small rational in [-bound, bound] with denominator dividing den.
  Gaussian rational(std::int64_t bound, std::int64_t den) { return Gaussian::rational(integer(-bound * den, bound * den), den); }
  Gaussian gaussian(std::int64_t bound, std::int64_t den) {
    return Gaussian(integer(-bound * den, bound * den), integer(-bound * den, bound * den), den);
  }
  /// ((2 - i) / (2 + i))^k i^j, a unit of the pinwheel ring.
  Gaussian pinwheel_unit(int max_k) {
    const Gaussian step = Gaussian(2, -1) / Gaussian(2, 1);
    Gaussian u(1);
    const int k = static_cast<int>(integer(0, max_k));
    for (int t = 0; t < k; ++t) u = u * step;
    for (int j = static_cast<int>(integer(0, 3)); j > 0; --j) u = u * Gaussian::i();
    return u;
  }
  delone::ExactMotion motion(std::int64_t bound, std::int64_t den, int max_k, bool allow_reflect = true) {
    return {gaussian(bound, den), pinwheel_unit(max_k), allow_reflect && coin()};
  }
};

/// Independent rational: numerator / denominator in lowest terms.
struct Frac {
  __int128 num = 0;
  __int128 den = 1;
  Frac() = default;
  Frac(__int128 n, __int128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 a = n < 0 ? -n : n, b = d;
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a == 0) a = 1;
    num = n / a;
    den = d / a;
  }
  friend Frac operator+(Frac a, Frac b) { return Frac(a.num * b.den + b.num * a.den, a.den * b.den); }
  friend Frac operator-(Frac a, Frac b) { return Frac(a.num * b.den - b.num * a.den, a.den * b.den); }
  friend Frac operator*(Frac a, Frac b) { return Frac(a.num * b.num, a.den * b.den); }
  friend bool operator==(Frac a, Frac b) { return a.num == b.num && a.den == b.den; }
  friend bool operator<(Frac a, Frac b) { return a.num * b.den < b.num * a.den; }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

inline Frac frac_re(const Gaussian& g) { return Frac(g.re_num(), g.den()); }
inline Frac frac_im(const Gaussian& g) { return Frac(g.im_num(), g.den()); }

/// t(k): largest t with 2^t dividing k, by repeated halving.
inline int trailing_twos(std::int64_t k) {
  int t = 0;
  while (k % 2 == 0) {
    k /= 2;
    ++t;
  }
  return t;
}

/// k + 2^-(t(k)+1) as an independent fraction.
inline Frac two_adic_oracle(std::int64_t k) {
  if (k == 0) return Frac(0, 1);
  return Frac(static_cast<__int128>(k) * (__int128(2) << trailing_twos(k)) + 1, __int128(2) << trailing_twos(k));
}

/// Hausdorff-type deviation on a ball, by brute force.
inline double brute_deviation(const std::vector<cplx>& p, const std::vector<cplx>& q, cplx c, double r) {
  auto inside = [&](cplx z) { return std::abs(z - c) <= r; };
  auto dist = [](cplx z, const std::vector<cplx>& set) {
    double best = INFINITY;
    for (const auto& w : set) best = std::min(best, std::abs(z - w));
    return best;
  };
  bool pin = false, qin = false;
  double worst = 0.0;
  for (const auto& z : p)
    if (inside(z)) {
      pin = true;
      worst = std::max(worst, dist(z, q));
    }
  for (const auto& z : q)
    if (inside(z)) {
      qin = true;
      worst = std::max(worst, dist(z, p));
    }
  if (!pin && !qin) return 0.0;
  return worst;
}

}  // namespace testing

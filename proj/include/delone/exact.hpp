#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace delone {

/// Element of Q(i): (re + im*i) / den with den > 0 and gcd(re, im, den) = 1.
///
/// Storage is int64; products are formed in 128-bit and reduced, so the
/// representation stays canonical. A result that does not fit after reduction
/// throws std::overflow_error rather than wrapping. Real rationals are the
/// elements with im == 0.
class Gaussian {
 public:
  constexpr Gaussian() = default;
  Gaussian(std::int64_t re);  // NOLINT(google-explicit-constructor)
  Gaussian(std::int64_t re, std::int64_t im, std::int64_t den = 1);

  static Gaussian rational(std::int64_t num, std::int64_t den) { return Gaussian(num, 0, den); }
  /// (p + q i) * i^j / (2+i)^k, the pinwheel ring encoding.
  static Gaussian from_ring(std::int64_t p, std::int64_t q, int k, int j);
  static Gaussian i() { return Gaussian(0, 1); }

  std::int64_t re_num() const { return re_; }
  std::int64_t im_num() const { return im_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return re_ == 0 && im_ == 0; }
  bool is_real() const { return im_ == 0; }

  Gaussian real() const { return Gaussian(re_, 0, den_); }
  Gaussian imag() const { return Gaussian(im_, 0, den_); }
  Gaussian conj() const { return Gaussian(re_, -im_, den_); }
  /// |z|^2 as a real element.
  Gaussian norm() const;

  double real_d() const { return static_cast<double>(re_) / static_cast<double>(den_); }
  double imag_d() const { return static_cast<double>(im_) / static_cast<double>(den_); }
  std::complex<double> to_complex() const { return {real_d(), imag_d()}; }

  Gaussian operator-() const { return Gaussian(-re_, -im_, den_); }
  friend Gaussian operator+(const Gaussian& a, const Gaussian& b);
  friend Gaussian operator-(const Gaussian& a, const Gaussian& b);
  friend Gaussian operator*(const Gaussian& a, const Gaussian& b);
  friend Gaussian operator/(const Gaussian& a, const Gaussian& b);
  Gaussian& operator+=(const Gaussian& o) { return *this = *this + o; }
  Gaussian& operator-=(const Gaussian& o) { return *this = *this - o; }
  Gaussian& operator*=(const Gaussian& o) { return *this = *this * o; }

  friend bool operator==(const Gaussian& a, const Gaussian& b) {
    return a.re_ == b.re_ && a.im_ == b.im_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Gaussian& a, const Gaussian& b) { return !(a == b); }

  /// Sign of a real element (throws if not real).
  int sign() const;
  /// Total order on real elements.
  friend bool real_less(const Gaussian& a, const Gaussian& b);
  /// Lexicographic (re, im) order; used for canonical forms only.
  friend bool lex_less(const Gaussian& a, const Gaussian& b);

  /// floor / ceil of a real element.
  std::int64_t floor() const;
  std::int64_t ceil() const;

  std::string str() const;

 private:
  static Gaussian reduce(__int128 re, __int128 im, __int128 den);

  std::int64_t re_ = 0;
  std::int64_t im_ = 0;
  std::int64_t den_ = 1;
};

bool real_less(const Gaussian& a, const Gaussian& b);
bool lex_less(const Gaussian& a, const Gaussian& b);

/// 2-adic valuation of a nonzero integer.
int two_adic_valuation(std::int64_t k);

struct GaussianHash {
  std::size_t operator()(const Gaussian& g) const noexcept {
    std::size_t h = std::hash<std::int64_t>{}(g.re_num());
    h ^= std::hash<std::int64_t>{}(g.im_num()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= std::hash<std::int64_t>{}(g.den()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

/// Twice the signed area of triangle (a, b, c): sign gives orientation.
Gaussian cross(const Gaussian& a, const Gaussian& b, const Gaussian& c);
int orient(const Gaussian& a, const Gaussian& b, const Gaussian& c);

}  // namespace delone

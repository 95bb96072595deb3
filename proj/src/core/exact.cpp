#include "delone/exact.hpp"

#include <limits>

namespace delone {

namespace {

using i128 = __int128;

i128 abs128(i128 v) { return v < 0 ? -v : v; }

i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t narrow(i128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error("exact arithmetic overflow");
  }
  return static_cast<std::int64_t>(v);
}

// floor division for real rationals
std::int64_t floor_div(std::int64_t n, std::int64_t d) {
  std::int64_t q = n / d;
  if ((n % d != 0) && ((n < 0) != (d < 0))) --q;
  return q;
}

}  // namespace

Gaussian::Gaussian(std::int64_t re) : re_(re), im_(0), den_(1) {}

Gaussian::Gaussian(std::int64_t re, std::int64_t im, std::int64_t den) {
  if (den == 0) throw std::domain_error("zero denominator");
  *this = reduce(re, im, den);
}

Gaussian Gaussian::reduce(i128 re, i128 im, i128 den) {
  if (den == 0) throw std::domain_error("zero denominator");
  if (den < 0) {
    re = -re;
    im = -im;
    den = -den;
  }
  i128 g = gcd128(gcd128(re, im), den);
  if (g > 1) {
    re /= g;
    im /= g;
    den /= g;
  }
  Gaussian out;
  out.re_ = narrow(re);
  out.im_ = narrow(im);
  out.den_ = narrow(den);
  return out;
}

Gaussian Gaussian::from_ring(std::int64_t p, std::int64_t q, int k, int j) {
  if (k < 0) throw std::domain_error("ring exponent k must be >= 0");
  Gaussian z(p, q);
  j = ((j % 4) + 4) % 4;
  for (int s = 0; s < j; ++s) z = z * Gaussian::i();
  Gaussian base(2, 1);
  for (int s = 0; s < k; ++s) z = z / base;
  return z;
}

Gaussian Gaussian::norm() const {
  i128 n = static_cast<i128>(re_) * re_ + static_cast<i128>(im_) * im_;
  i128 d = static_cast<i128>(den_) * den_;
  return reduce(n, 0, d);
}

Gaussian operator+(const Gaussian& a, const Gaussian& b) {
  if (a.den_ == b.den_) {
    return Gaussian::reduce(static_cast<i128>(a.re_) + b.re_, static_cast<i128>(a.im_) + b.im_, a.den_);
  }
  i128 g = gcd128(a.den_, b.den_);
  i128 fa = b.den_ / g;
  i128 fb = a.den_ / g;
  return Gaussian::reduce(a.re_ * fa + b.re_ * fb, a.im_ * fa + b.im_ * fb, a.den_ * fa);
}

Gaussian operator-(const Gaussian& a, const Gaussian& b) { return a + (-b); }

Gaussian operator*(const Gaussian& a, const Gaussian& b) {
  // cross-reduce first to keep the 128-bit intermediates small
  i128 ar = a.re_, ai = a.im_, ad = a.den_;
  i128 br = b.re_, bi = b.im_, bd = b.den_;
  i128 g1 = gcd128(gcd128(ar, ai), bd);
  if (g1 > 1) { ar /= g1; ai /= g1; bd /= g1; }
  i128 g2 = gcd128(gcd128(br, bi), ad);
  if (g2 > 1) { br /= g2; bi /= g2; ad /= g2; }
  return Gaussian::reduce(ar * br - ai * bi, ar * bi + ai * br, ad * bd);
}

Gaussian operator/(const Gaussian& a, const Gaussian& b) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  // a / b = a * conj(b) * den_b^2 / (|num_b|^2 * den_b)... computed as a * (den_b * conj(nb)) / |nb|^2
  i128 nb = static_cast<i128>(b.re_) * b.re_ + static_cast<i128>(b.im_) * b.im_;
  Gaussian inv = Gaussian::reduce(static_cast<i128>(b.re_) * b.den_, -static_cast<i128>(b.im_) * b.den_, nb);
  return a * inv;
}

int Gaussian::sign() const {
  if (im_ != 0) throw std::domain_error("sign of non-real element");
  return (re_ > 0) - (re_ < 0);
}

bool real_less(const Gaussian& a, const Gaussian& b) { return (b - a).sign() > 0; }

bool lex_less(const Gaussian& a, const Gaussian& b) {
  Gaussian dr = b.real() - a.real();
  if (!dr.is_zero()) return dr.sign() > 0;
  return (b.imag() - a.imag()).sign() > 0;
}

std::int64_t Gaussian::floor() const {
  if (im_ != 0) throw std::domain_error("floor of non-real element");
  return floor_div(re_, den_);
}

std::int64_t Gaussian::ceil() const { return -(-*this).floor(); }

std::string Gaussian::str() const {
  std::string s = "(" + std::to_string(re_);
  if (im_ != 0) s += (im_ < 0 ? "-" : "+") + std::to_string(im_ < 0 ? -im_ : im_) + "i";
  s += ")";
  if (den_ != 1) s += "/" + std::to_string(den_);
  return s;
}

int two_adic_valuation(std::int64_t k) {
  if (k == 0) throw std::domain_error("valuation of zero");
  int t = 0;
  while ((k & 1) == 0) {
    k /= 2;
    ++t;
  }
  return t;
}

Gaussian cross(const Gaussian& a, const Gaussian& b, const Gaussian& c) {
  // imag(conj(b - a) * (c - a))
  return ((b - a).conj() * (c - a)).imag();
}

int orient(const Gaussian& a, const Gaussian& b, const Gaussian& c) { return cross(a, b, c).sign(); }

}  // namespace delone

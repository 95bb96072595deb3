#include "delone/geom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace delone {

ExactMotion ExactMotion::compose(const ExactMotion& h) const {
  ExactMotion out;
  out.shift = apply(h.shift);
  out.unit = unit * (reflect ? h.unit.conj() : h.unit);
  out.reflect = reflect != h.reflect;
  return out;
}

ExactMotion ExactMotion::inverse() const {
  ExactMotion out;
  if (reflect) {
    out.shift = -(unit * shift.conj());
    out.unit = unit;
  } else {
    out.shift = -(unit.conj() * shift);
    out.unit = unit.conj();
  }
  out.reflect = reflect;
  return out;
}

FloatMotion FloatMotion::compose(const FloatMotion& h) const {
  FloatMotion out;
  out.shift = apply(h.shift);
  out.unit = unit * (reflect ? std::conj(h.unit) : h.unit);
  out.reflect = reflect != h.reflect;
  return out;
}

FloatMotion FloatMotion::inverse() const {
  FloatMotion out;
  if (reflect) {
    out.shift = -(unit * std::conj(shift));
    out.unit = unit;
  } else {
    out.shift = -(std::conj(unit) * shift);
    out.unit = std::conj(unit);
  }
  out.reflect = reflect;
  return out;
}

FloatMotion to_float(const ExactMotion& g) {
  return {g.shift.to_complex(), g.unit.to_complex(), g.reflect};
}

void check_unit(const Gaussian& u) {
  if (u.norm() != Gaussian(1)) throw std::domain_error("rotation unit " + u.str() + " does not have modulus 1");
}

// ---- Point ---------------------------------------------------------------

Point Point::exact1(const Gaussian& x) {
  if (!x.is_real()) throw std::invalid_argument("1D exact point must be real");
  Point p;
  p.dim_ = 1;
  p.exact_ = true;
  p.ex_ = x;
  return p;
}

Point Point::exact2(const Gaussian& z) {
  Point p;
  p.dim_ = 2;
  p.exact_ = true;
  p.ex_ = z;
  return p;
}

Point Point::float1(double x) {
  Point p;
  p.dim_ = 1;
  p.fl_ = {x, 0.0};
  return p;
}

Point Point::float2(double x, double y) {
  Point p;
  p.dim_ = 2;
  p.fl_ = {x, y};
  return p;
}

const Gaussian& Point::exact_value() const {
  if (!exact_) throw std::invalid_argument("point is floating");
  return ex_;
}

cplx Point::float_value() const {
  if (exact_) throw std::invalid_argument("point is exact; convert explicitly");
  return fl_;
}

Point Point::to_floating() const {
  if (!exact_) return *this;
  Point p;
  p.dim_ = dim_;
  p.fl_ = ex_.to_complex();
  return p;
}

bool operator==(const Point& a, const Point& b) {
  if (a.dim_ != b.dim_ || a.exact_ != b.exact_) return false;
  return a.exact_ ? a.ex_ == b.ex_ : a.fl_ == b.fl_;
}

// ---- Rotation ------------------------------------------------------------

Rotation Rotation::identity(int dim, bool exact) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("dimension must be 1 or 2");
  Rotation r;
  r.dim_ = dim;
  r.exact_ = exact;
  return r;
}

Rotation Rotation::exact_unit(const Gaussian& u, bool reflect) {
  check_unit(u);
  Rotation r;
  r.dim_ = 2;
  r.exact_ = true;
  r.reflect_ = reflect;
  r.eu_ = u;
  return r;
}

Rotation Rotation::from_ring(std::int64_t p, std::int64_t q, int k, int j, bool reflect) {
  std::int64_t n = p * p + q * q;
  std::int64_t five_k = 1;
  for (int s = 0; s < k; ++s) five_k *= 5;
  if (n != five_k) throw std::domain_error("ring unit: p^2 + q^2 != 5^k");
  return exact_unit(Gaussian::from_ring(p, q, k, j), reflect);
}

Rotation Rotation::angle(double theta, bool reflect) {
  Rotation r;
  r.dim_ = 2;
  r.reflect_ = reflect;
  r.fu_ = std::polar(1.0, theta);
  return r;
}

Rotation Rotation::sign_flip(bool exact) {
  Rotation r;
  r.dim_ = 1;
  r.exact_ = exact;
  r.eu_ = Gaussian(-1);
  r.fu_ = {-1.0, 0.0};
  return r;
}

const Gaussian& Rotation::exact_unit_value() const {
  if (!exact_) throw std::invalid_argument("rotation is floating");
  return eu_;
}

cplx Rotation::float_unit() const { return exact_ ? eu_.to_complex() : fu_; }

// ---- Isometry ------------------------------------------------------------

Isometry Isometry::identity(int dim, bool exact) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("dimension must be 1 or 2");
  Isometry g;
  g.dim_ = dim;
  g.exact_ = exact;
  return g;
}

Isometry Isometry::translation(const Point& x) { return make(x, Rotation::identity(x.dim(), x.is_exact())); }

Isometry Isometry::make(const Point& x, const Rotation& r) {
  if (x.dim() != r.dim()) throw std::invalid_argument("dimension mismatch");
  if (x.is_exact() != r.is_exact()) throw std::invalid_argument("exact/floating mix");
  Isometry g;
  g.dim_ = x.dim();
  g.exact_ = x.is_exact();
  if (g.exact_) {
    g.em_ = {x.exact_value(), r.eu_, r.reflect_};
  } else {
    g.fm_ = {x.float_value(), r.fu_, r.reflect_};
  }
  return g;
}

const ExactMotion& Isometry::exact_motion() const {
  if (!exact_) throw std::invalid_argument("isometry is floating");
  return em_;
}

FloatMotion Isometry::float_motion() const { return exact_ ? to_float(em_) : fm_; }

Rotation Isometry::rotation() const {
  Rotation r = Rotation::identity(dim_, exact_);
  r.reflect_ = exact_ ? em_.reflect : fm_.reflect;
  if (exact_) {
    r.eu_ = em_.unit;
  } else {
    r.fu_ = fm_.unit;
  }
  return r;
}

Point Isometry::translation_part() const {
  if (exact_) return dim_ == 1 ? Point::exact1(em_.shift) : Point::exact2(em_.shift);
  return dim_ == 1 ? Point::float1(fm_.shift.real()) : Point::float2(fm_.shift.real(), fm_.shift.imag());
}

namespace {
void check_compatible(int d1, bool e1, int d2, bool e2) {
  if (d1 != d2) throw std::invalid_argument("dimension mismatch");
  if (e1 != e2) throw std::invalid_argument("exact/floating mix");
}
}  // namespace

Point isometry_apply(const Isometry& g, const Point& p) {
  check_compatible(g.dim_, g.exact_, p.dim(), p.is_exact());
  if (g.exact_) {
    Gaussian z = g.em_.apply(p.exact_value());
    return g.dim_ == 1 ? Point::exact1(z) : Point::exact2(z);
  }
  cplx z = g.fm_.apply(p.float_value());
  return g.dim_ == 1 ? Point::float1(z.real()) : Point::float2(z.real(), z.imag());
}

Isometry isometry_compose(const Isometry& g, const Isometry& h) {
  check_compatible(g.dim_, g.exact_, h.dim_, h.exact_);
  Isometry out = g;
  if (g.exact_) {
    out.em_ = g.em_.compose(h.em_);
  } else {
    out.fm_ = g.fm_.compose(h.fm_);
  }
  return out;
}

Isometry isometry_invert(const Isometry& g) {
  Isometry out = g;
  if (g.exact_) {
    out.em_ = g.em_.inverse();
  } else {
    out.fm_ = g.fm_.inverse();
  }
  return out;
}

double rotation_distance(const Rotation& r) {
  if (r.reflect()) return std::numbers::pi;
  cplx u = r.float_unit();
  return std::abs(std::atan2(u.imag(), u.real()));
}

double rotation_distance(const FloatMotion& g) {
  if (g.reflect) return std::numbers::pi;
  return std::abs(std::arg(g.unit));
}

double rotation_distance(const ExactMotion& g) { return rotation_distance(to_float(g)); }

bool unit_is_root_of_unity(const Gaussian& u) {
  check_unit(u);
  return u == Gaussian(1) || u == Gaussian(-1) || u == Gaussian(0, 1) || u == Gaussian(0, -1);
}

// ---- polygons ------------------------------------------------------------

Gaussian area2(const Polygon& poly) {
  Gaussian s;
  const std::size_t n = poly.size();
  for (std::size_t a = 0; a < n; ++a) {
    const Gaussian& p = poly[a];
    const Gaussian& q = poly[(a + 1) % n];
    s += (p.conj() * q).imag();
  }
  return s;
}

Polygon ccw(Polygon poly) {
  if (poly.size() >= 3 && area2(poly).sign() < 0) std::reverse(poly.begin(), poly.end());
  return poly;
}

Polygon clip_convex(const Polygon& subject, const Polygon& clip) {
  Polygon out = subject;
  const std::size_t m = clip.size();
  for (std::size_t e = 0; e < m && !out.empty(); ++e) {
    const Gaussian& a = clip[e];
    const Gaussian& b = clip[(e + 1) % m];
    Polygon in;
    in.swap(out);
    const std::size_t n = in.size();
    for (std::size_t s = 0; s < n; ++s) {
      const Gaussian& p = in[s];
      const Gaussian& q = in[(s + 1) % n];
      Gaussian cp = cross(a, b, p);
      Gaussian cq = cross(a, b, q);
      int sp = cp.sign();
      int sq = cq.sign();
      if (sp >= 0) out.push_back(p);
      if ((sp > 0 && sq < 0) || (sp < 0 && sq > 0)) {
        Gaussian t = cp / (cp - cq);
        out.push_back(p + t * (q - p));
      }
    }
  }
  return out;
}

namespace {
// Projection extent of poly on axis n: min/max of Re(conj(n) p).
std::pair<Gaussian, Gaussian> project(const Polygon& poly, const Gaussian& n) {
  Gaussian lo = (n.conj() * poly[0]).real();
  Gaussian hi = lo;
  for (const auto& p : poly) {
    Gaussian v = (n.conj() * p).real();
    if (real_less(v, lo)) lo = v;
    if (real_less(hi, v)) hi = v;
  }
  return {lo, hi};
}

bool separated_on_edges(const Polygon& a, const Polygon& b) {
  const std::size_t n = a.size();
  for (std::size_t e = 0; e < n; ++e) {
    Gaussian d = a[(e + 1) % n] - a[e];
    Gaussian axis = d * Gaussian(0, -1);
    auto [alo, ahi] = project(a, axis);
    auto [blo, bhi] = project(b, axis);
    if (real_less(ahi, blo) || real_less(bhi, alo)) return true;
  }
  return false;
}
}  // namespace

bool convex_intersect_closed(const Polygon& a, const Polygon& b) {
  if (a.empty() || b.empty()) return false;
  return !separated_on_edges(a, b) && !separated_on_edges(b, a);
}

int point_in_convex(const Gaussian& p, const Polygon& poly) {
  const std::size_t n = poly.size();
  bool on_edge = false;
  for (std::size_t e = 0; e < n; ++e) {
    int o = orient(poly[e], poly[(e + 1) % n], p);
    if (o < 0) return -1;
    if (o == 0) on_edge = true;
  }
  return on_edge ? 0 : 1;
}

Polygon transform(const ExactMotion& g, const Polygon& poly) {
  Polygon out;
  out.reserve(poly.size());
  for (const auto& v : poly) out.push_back(g.apply(v));
  if (g.reflect) std::reverse(out.begin(), out.end());
  return out;
}

std::vector<cplx> to_float(const Polygon& poly) {
  std::vector<cplx> out;
  out.reserve(poly.size());
  for (const auto& v : poly) out.push_back(v.to_complex());
  return out;
}

double point_segment_distance(cplx p, cplx a, cplx b) {
  cplx d = b - a;
  double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(p - a);
  double t = std::clamp(((p - a) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

double boundary_distance(cplx p, const std::vector<cplx>& poly) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < poly.size(); ++e) {
    best = std::min(best, point_segment_distance(p, poly[e], poly[(e + 1) % poly.size()]));
  }
  return best;
}

bool point_in_polygon(cplx p, const std::vector<cplx>& poly) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t a = 0, b = n - 1; a < n; b = a++) {
    const cplx& u = poly[a];
    const cplx& v = poly[b];
    if ((u.imag() > p.imag()) != (v.imag() > p.imag())) {
      double x = (v.real() - u.real()) * (p.imag() - u.imag()) / (v.imag() - u.imag()) + u.real();
      if (p.real() < x) inside = !inside;
    }
  }
  return inside;
}

}  // namespace delone

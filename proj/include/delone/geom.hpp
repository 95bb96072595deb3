#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "delone/exact.hpp"

namespace delone {

using cplx = std::complex<double>;

/// z -> shift + unit * (reflect ? conj(z) : z), exact. unit must have modulus 1.
struct ExactMotion {
  Gaussian shift;
  Gaussian unit{1};
  bool reflect = false;

  static ExactMotion identity() { return {}; }
  static ExactMotion translation(const Gaussian& x) { return {x, Gaussian(1), false}; }

  Gaussian apply(const Gaussian& z) const { return shift + unit * (reflect ? z.conj() : z); }
  /// Linear part only (no shift).
  Gaussian apply_linear(const Gaussian& z) const { return unit * (reflect ? z.conj() : z); }
  /// (*this) o h
  ExactMotion compose(const ExactMotion& h) const;
  ExactMotion inverse() const;

  friend bool operator==(const ExactMotion& a, const ExactMotion& b) {
    return a.shift == b.shift && a.unit == b.unit && a.reflect == b.reflect;
  }
};

struct FloatMotion {
  cplx shift{0.0, 0.0};
  cplx unit{1.0, 0.0};
  bool reflect = false;

  static FloatMotion identity() { return {}; }
  static FloatMotion translation(cplx x) { return {x, {1.0, 0.0}, false}; }
  static FloatMotion rotation(double theta) { return {{0.0, 0.0}, std::polar(1.0, theta), false}; }

  cplx apply(cplx z) const { return shift + unit * (reflect ? std::conj(z) : z); }
  FloatMotion compose(const FloatMotion& h) const;
  FloatMotion inverse() const;
};

FloatMotion to_float(const ExactMotion& g);

/// Throws std::domain_error unless |u| == 1 exactly.
void check_unit(const Gaussian& u);

// ---- tagged values -------------------------------------------------------

/// A point of R^d, d in {1,2}; exact or floating, never both.
class Point {
 public:
  static Point exact1(const Gaussian& x);
  static Point exact2(const Gaussian& z);
  static Point float1(double x);
  static Point float2(double x, double y);

  int dim() const { return dim_; }
  bool is_exact() const { return exact_; }
  const Gaussian& exact_value() const;
  cplx float_value() const;
  /// Explicit conversion; exact -> floating is lossy.
  Point to_floating() const;

  friend bool operator==(const Point& a, const Point& b);

 private:
  int dim_ = 1;
  bool exact_ = false;
  Gaussian ex_;
  cplx fl_{0.0, 0.0};
};

/// Element of O(d). For d = 1 only the sign flip (unit -1) exists.
class Rotation {
 public:
  static Rotation identity(int dim, bool exact);
  static Rotation exact_unit(const Gaussian& u, bool reflect = false);
  static Rotation from_ring(std::int64_t p, std::int64_t q, int k, int j, bool reflect = false);
  static Rotation angle(double theta, bool reflect = false);
  static Rotation sign_flip(bool exact);

  int dim() const { return dim_; }
  bool is_exact() const { return exact_; }
  bool reflect() const { return reflect_; }
  const Gaussian& exact_unit_value() const;
  cplx float_unit() const;

 private:
  friend class Isometry;
  int dim_ = 2;
  bool exact_ = false;
  bool reflect_ = false;
  Gaussian eu_{1};
  cplx fu_{1.0, 0.0};
};

class Isometry {
 public:
  static Isometry identity(int dim, bool exact);
  static Isometry translation(const Point& x);
  static Isometry make(const Point& x, const Rotation& r);

  int dim() const { return dim_; }
  bool is_exact() const { return exact_; }
  const ExactMotion& exact_motion() const;
  FloatMotion float_motion() const;
  Rotation rotation() const;
  Point translation_part() const;

 private:
  friend Point isometry_apply(const Isometry&, const Point&);
  friend Isometry isometry_compose(const Isometry&, const Isometry&);
  friend Isometry isometry_invert(const Isometry&);
  int dim_ = 2;
  bool exact_ = false;
  ExactMotion em_;
  FloatMotion fm_;
};

/// x + r.p; throws std::invalid_argument on dimension or representation mismatch.
Point isometry_apply(const Isometry& g, const Point& p);
/// compose(g, h)(p) == g(h(p))
Isometry isometry_compose(const Isometry& g, const Isometry& h);
Isometry isometry_invert(const Isometry& g);

/// |theta| in [0, pi] for proper rotations, pi for reflections.
double rotation_distance(const Rotation& r);
double rotation_distance(const FloatMotion& g);
double rotation_distance(const ExactMotion& g);

/// True iff u is one of 1, i, -1, -i. Throws std::domain_error if |u| != 1.
bool unit_is_root_of_unity(const Gaussian& u);

// ---- exact convex polygons ----------------------------------------------

using Polygon = std::vector<Gaussian>;

/// Twice the signed area (real).
Gaussian area2(const Polygon& poly);
/// Counter-clockwise orientation of the vertex list.
Polygon ccw(Polygon poly);
/// Intersection of two convex counter-clockwise polygons (possibly degenerate / empty).
Polygon clip_convex(const Polygon& subject, const Polygon& clip);
/// Closed convex sets intersect (touching counts).
bool convex_intersect_closed(const Polygon& a, const Polygon& b);
/// 1: strictly inside, 0: on boundary, -1: outside. poly convex ccw.
int point_in_convex(const Gaussian& p, const Polygon& poly);
Polygon transform(const ExactMotion& g, const Polygon& poly);

std::vector<cplx> to_float(const Polygon& poly);
double point_segment_distance(cplx p, cplx a, cplx b);
/// Distance from p to the boundary of a polygon (vertex list, any orientation).
double boundary_distance(cplx p, const std::vector<cplx>& poly);
bool point_in_polygon(cplx p, const std::vector<cplx>& poly);

}  // namespace delone

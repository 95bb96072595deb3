#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "delone/exact.hpp"
#include "delone/geom.hpp"

namespace delone {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Closed axis-aligned box; for dim 1 only the first coordinate is used.
struct Box {
  int dim = 1;
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{0.0, 0.0};

  static Box interval(double a, double b) { return {1, {a, 0.0}, {b, 0.0}}; }
  static Box square(double x0, double y0, double x1, double y1) { return {2, {x0, y0}, {x1, y1}}; }
  /// Centered cube of half-side h.
  static Box centered(int dim, double h) { return {dim, {-h, dim == 2 ? -h : 0.0}, {h, dim == 2 ? h : 0.0}}; }

  bool contains(cplx p) const;
  bool contains_exact(const Gaussian& p) const;
  double volume() const;
  cplx center() const;
  Box expanded(double s) const;
};

enum class GenKind { IntegerLattice, TwoAdic, TwoAdicPunctured, Bohr, DecoratedTiling, HalfLineDefect };

struct TrigTerm {
  double amplitude = 0.0;
  double frequency = 0.0;
  double phase = 0.0;
};

struct GeneratorSpec {
  GenKind kind = GenKind::IntegerLattice;
  int dim = 1;
  std::vector<TrigTerm> trig;  // bohr
  std::string rule;            // decorated tiling: "pinwheel" or "chair"
  int level = 0;
  bool exact = true;

  static GeneratorSpec lattice(int dim) { return {GenKind::IntegerLattice, dim, {}, {}, 0, true}; }
  static GeneratorSpec two_adic() { return {GenKind::TwoAdic, 1, {}, {}, 0, true}; }
  static GeneratorSpec two_adic_punctured() { return {GenKind::TwoAdicPunctured, 1, {}, {}, 0, true}; }
  static GeneratorSpec bohr(std::vector<TrigTerm> f) { return {GenKind::Bohr, 1, std::move(f), {}, 0, false}; }
  /// The standard example: (1/3) cos(2 pi alpha x), alpha the inverse golden ratio.
  static GeneratorSpec bohr_golden();
  static GeneratorSpec decorated(std::string rule, int level, bool exact = true) {
    return {GenKind::DecoratedTiling, 2, {}, std::move(rule), level, exact};
  }
  static GeneratorSpec half_line_defect() { return {GenKind::HalfLineDefect, 1, {}, {}, 0, true}; }
};

std::string kind_name(GenKind k);
GenKind kind_from_name(const std::string& s);

double trig_eval(const std::vector<TrigTerm>& f, double x);

/// Finite piece of a uniformly discrete set. Points are kept sorted
/// lexicographically; `exact` mirrors `points` when the generator is exact.
///
/// The region where the set is known is frame(window): window is a box in
/// the generator's own coordinates and frame the isometry applied since.
class PointSetWindow {
 public:
  PointSetWindow() = default;
  PointSetWindow(int dim, std::vector<cplx> pts, Box window, double radius);
  PointSetWindow(int dim, std::vector<Gaussian> pts, Box window, double radius);

  int dim() const { return dim_; }
  bool is_exact() const { return exact_; }
  std::size_t size() const { return pts_.size(); }
  bool empty() const { return pts_.empty(); }
  const std::vector<cplx>& points() const { return pts_; }
  const std::vector<Gaussian>& exact_points() const { return ex_; }
  const Box& window() const { return window_; }
  const FloatMotion& frame() const { return frame_; }
  double radius() const { return radius_; }

  GeneratorSpec provenance;
  /// Exact form of frame(), when the window is exact.
  ExactMotion exact_frame;

  /// Nearest point; index -1 and +inf distance when empty.
  std::pair<std::ptrdiff_t, double> nearest(cplx q) const;
  /// Indices of points with |p - q| <= r (closed), ascending.
  std::vector<std::size_t> within(cplx q, double r) const;
  /// Whether B(c, r) lies in the known region.
  bool covers_ball(cplx c, double r) const;
  /// Signed distance from c to the edge of the known region (negative outside).
  double coverage_radius(cplx c) const;

  PointSetWindow transformed(const FloatMotion& g) const;
  PointSetWindow transformed(const ExactMotion& g) const;
  PointSetWindow translated(cplx x) const { return transformed(FloatMotion::translation(x)); }
  /// Floating copy, same region.
  PointSetWindow to_floating() const;
  /// Restores a frame recorded earlier (points are not moved).
  void set_frame(const FloatMotion& f, const ExactMotion& e) {
    frame_ = f;
    exact_frame = e;
  }

 private:
  void finish();

  int dim_ = 1;
  bool exact_ = false;
  std::vector<cplx> pts_;
  std::vector<Gaussian> ex_;
  Box window_;
  FloatMotion frame_;
  double radius_ = 0.0;

  // uniform grid over the bounding box (dim 2); dim 1 uses the sort order
  double cell_ = 1.0;
  double gx0_ = 0.0, gy0_ = 0.0;
  int nx_ = 0, ny_ = 0;
  std::vector<std::uint32_t> cell_start_;
  std::vector<std::uint32_t> cell_items_;
};

/// k + 2^-(t(k)+1), with p_0 = 0.
Gaussian two_adic_point(std::int64_t k);

PointSetWindow realize(const GeneratorSpec& gen, const Box& window);

/// Sorted consecutive differences (dim 1, at least two points).
std::vector<double> neighbor_gap_spectrum(const PointSetWindow& p);
std::vector<Gaussian> neighbor_gap_spectrum_exact(const PointSetWindow& p);

/// Some p with |p - q| < eps (strict).
bool thickening_contains(const PointSetWindow& p, cplx q, double eps);
bool thickening_contains_exact(const PointSetWindow& p, const Gaussian& q, const Gaussian& eps);

/// Rational value of a double (exact, dyadic).
Gaussian dyadic(double v);
/// Rational read off the shortest decimal form of v (0.3 gives 3/10);
/// falls back to dyadic when that does not fit.
Gaussian decimal(double v);

}  // namespace delone

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "delone/pointset.hpp"

namespace delone {

/// Support of a pattern: a closed ball or a box.
struct Region {
  bool is_ball = true;
  cplx center{0.0, 0.0};
  double radius = 0.0;  // ball
  Box box;              // box

  static Region ball(cplx c, double r) { return {true, c, r, {}}; }
  static Region of_box(const Box& b) { return {false, b.center(), 0.0, b}; }

  bool contains(cplx p) const;
  /// Radius of the smallest ball about center containing the region.
  double circumradius() const;
  Region translated(cplx x) const;
};

/// d_V(P, Q): max over points of either set in V of the distance to the
/// other (full) set. 0 when neither meets V, +inf when only one does.
double pattern_deviation(const PointSetWindow& p, const PointSetWindow& q, const Region& v);
/// Same on plain point lists (brute force).
double pattern_deviation(const std::vector<cplx>& p, const std::vector<cplx>& q, const Region& v);
/// Exact squared d_V on exact sets; nullopt encodes +inf.
std::optional<Gaussian> pattern_deviation_sq_exact(const PointSetWindow& p, const PointSetWindow& q, const Region& v);
/// Whether both windows extend past V by `value`.
bool deviation_margin_ok(const PointSetWindow& p, const PointSetWindow& q, const Region& v, double value);

struct LrResult {
  double value = 0.0;
  /// The windows did not reach far enough to certify; value is then only
  /// an upper bound.
  bool window_limited = false;
};

inline constexpr double kLrCap = 0.70710678118654752440;

/// d_LR about the origin, by bisection to 1e-9. Windows with the same
/// points over the same known region give 0.
LrResult local_rubber_distance(const PointSetWindow& p, const PointSetWindow& q);

struct LmBracket {
  double lower = 0.0;
  double upper = kLrCap;
  bool certified = true;  // false for floating inputs or custom candidates
};

/// d_LM bracket. Empty candidates mean all point differences near the
/// origin, which makes the lower bound rigorous on exact data.
LmBracket local_matching_distance(const PointSetWindow& p, const PointSetWindow& q,
                                  const std::vector<cplx>& candidates = {});

struct WiggleResult {
  double upper = 0.0;
  double lower = 0.0;
  double theta = 0.0;        // rotation applied to P
  double theta_prime = 0.0;  // rotation applied to Q
};

/// d~_B on an angle grid of the given step (rotations about the center of B).
WiggleResult wiggle_deviation(const PointSetWindow& p, const PointSetWindow& q, const Region& b, double step);

/// Pattern support about the origin.
struct SimilarityClass {
  std::vector<std::uint32_t> type;   // cover cells met by the content
  std::vector<std::size_t> members;  // indices into the centers list
};

/// Groups the patterns (P - c) cap shape. eps == 0 needs exact P and exact
/// centers and groups by exact content.
std::vector<SimilarityClass> classify_patterns(const PointSetWindow& p, const Region& shape, double eps,
                                               const std::vector<cplx>& centers);
std::vector<SimilarityClass> classify_patterns_exact(const PointSetWindow& p, const Region& shape,
                                                     const std::vector<Gaussian>& centers);
/// Number of cells of the eps/2 cover of the shape.
std::size_t cover_size(const Region& shape, double eps, int dim);

/// Content of P - c inside shape, as offsets.
std::vector<cplx> pattern_content(const PointSetWindow& p, cplx c, const Region& shape);

}  // namespace delone

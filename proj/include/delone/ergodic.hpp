#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "delone/exact.hpp"
#include "delone/pointset.hpp"

namespace delone {

/// Axis-aligned box with rational corners (real Gaussians).
struct SquarishBox {
  int dim = 1;
  std::array<Gaussian, 2> lo{};
  std::array<Gaussian, 2> hi{};

  static SquarishBox interval(const Gaussian& a, const Gaussian& b) { return {1, {a, Gaussian()}, {b, Gaussian()}}; }
  static SquarishBox square(const Gaussian& x0, const Gaussian& y0, const Gaussian& x1, const Gaussian& y1) {
    return {2, {x0, y0}, {x1, y1}};
  }

  Gaussian side(int axis) const { return hi[axis] - lo[axis]; }
  Gaussian volume() const;
  /// All sides in [u, 2u].
  bool in_class(const Gaussian& u) const;
  Box to_box() const;
  friend bool operator==(const SquarishBox& a, const SquarishBox& b) {
    return a.dim == b.dim && a.lo == b.lo && a.hi == b.hi;
  }
};

/// Splits each side L into ceil(L / 2u) equal parts. Throws
/// std::invalid_argument when u > w or a side of b is outside [w, 2w].
std::vector<SquarishBox> squarish_decompose(const SquarishBox& b, const Gaussian& u, const Gaussian& w);

/// Volume of the K-collar of b for K the centered cube of half-side s.
double van_hove_boundary_volume(const Box& b, double s);
Gaussian van_hove_boundary_volume(const SquarishBox& b, const Gaussian& s);

/// f(P) = sum over p of phi(|p|) / (integral of phi), with phi = 1 up to
/// `window` and a smoothstep down to 0 at window + bump. The constant kind
/// ignores P.
struct WeightFunctionSpec {
  enum class Kind { SmoothedCount, Constant };
  Kind kind = Kind::SmoothedCount;
  double window = 1.0;
  double bump = 1.0;
  double constant = 0.0;

  static WeightFunctionSpec smoothed_count(double w, double b) { return {Kind::SmoothedCount, w, b, 0.0}; }
  static WeightFunctionSpec constant_value(double c) { return {Kind::Constant, 0.0, 0.0, c}; }

  double support() const { return kind == Kind::Constant ? 0.0 : window + bump; }
  double profile(double s) const;
  /// Integral of phi(|x|) over R^dim.
  double mass(int dim) const;
  /// sup |f| over sets with the given discreteness radius.
  double bound(int dim, double radius) const;
  /// Lipschitz constant of x -> f(P - x) for such sets.
  double lipschitz(int dim, double radius) const;
};

/// f(P - x).
double evaluate(const WeightFunctionSpec& f, const PointSetWindow& p, cplx x);

struct Weight {
  double value = 0.0;
  double error = 0.0;  // first-order quadrature bound, not certified
};

/// Integral of f(P - x) over b. Points whose support lies inside b
/// contribute exactly; the rest use the midpoint rule on the step-h grid of
/// b (h <= 0 means bump / 8). Throws std::domain_error when the known region
/// misses b grown by the support.
Weight weight(const WeightFunctionSpec& f, const PointSetWindow& p, const Box& b, double h = 0.0);
/// Same for r^-1 P, r the rotation by theta about the origin.
Weight weight_rotated(const WeightFunctionSpec& f, const PointSetWindow& p, const Box& b, double theta, double h = 0.0);
/// Plain midpoint rule for an arbitrary functional g(x) = f(P - x).
double weight_generic(const std::function<double(cplx)>& g, const Box& b, double h);

struct DensityBounds {
  double lower = 0.0;  // f-(U): min of w/vol over the sampled boxes
  double upper = 0.0;  // f+(U)
  std::size_t samples = 0;
};

/// Samples boxes of class U (sides uniform in [U, 2U]) inside `region`
/// (default: the window, shrunk by the support). Throws std::domain_error
/// when no such box fits.
DensityBounds density_bounds(const WeightFunctionSpec& f, const PointSetWindow& p, double u, std::size_t samples,
                             std::uint64_t seed, const std::optional<Box>& region = std::nullopt, double h = 0.0);

struct DensityRow {
  double u = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::size_t samples = 0;
};

struct DensityCurve {
  std::vector<DensityRow> rows;
  double limit = 0.0;  // midpoint of the last row
};

DensityCurve density_curve(const WeightFunctionSpec& f, const PointSetWindow& p, const std::vector<double>& us,
                           std::size_t samples, std::uint64_t seed, const std::optional<Box>& region = std::nullopt,
                           double h = 0.0);

/// J_n(f, P) over [-n, n]^d; with angles, the mean of J_n(f, r^-1 P).
double birkhoff_average(const WeightFunctionSpec& f, const PointSetWindow& p, double n,
                        const std::vector<double>& angles = {}, double h = 0.0);

/// Largest change of f(P) when every point moves by at most delta, over
/// random trials, one value per delta.
std::vector<double> perturbation_sweep(const WeightFunctionSpec& f, const PointSetWindow& p,
                                       const std::vector<double>& deltas, std::size_t trials, std::uint64_t seed);

}  // namespace delone

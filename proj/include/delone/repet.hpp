#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "delone/metrics.hpp"
#include "delone/pointset.hpp"

namespace delone {

enum class PeriodMode { LR, V };

struct PeriodSet {
  std::vector<cplx> shifts;  // accepted grid shifts, in grid order
  double eps = 0.0;
  PeriodMode mode = PeriodMode::LR;
  Box region;                // where max_gap is measured
  double max_gap = kInfinity;
  std::size_t tested = 0;
};

/// d_V(P + x, P) computed without copying P.
double shifted_deviation(const PointSetWindow& p, cplx x, const Region& v);

/// Grid shifts x with d_LR(P + x, P) < eps (mode LR) or d_V(P + x, P) < eps
/// (mode V). Throws std::domain_error when the window cannot host a shift.
PeriodSet period_set(const PointSetWindow& p, double eps, PeriodMode mode, const std::optional<Region>& v,
                     const std::vector<cplx>& grid, const Box& region);
/// Largest distance from a point of region to the shift set (+inf if empty).
double max_gap(const std::vector<cplx>& shifts, const Box& region);
/// Integer shifts in [lo, hi] (dim 1) or [lo, hi]^2 (dim 2).
std::vector<cplx> integer_grid(int dim, std::int64_t lo, std::int64_t hi);

struct RepetitivityOptions {
  std::size_t r_centers = 32;
  std::size_t big_centers = 32;
  std::uint64_t seed = 1;
  bool wiggle = false;
  /// Where both kinds of centers are drawn; defaults to the window shrunk to half.
  std::optional<Box> sample_region;
  /// Explicit centers; a nonempty list replaces the random draw.
  std::vector<cplx> r_center_list;
  std::vector<cplx> big_center_list;
};

struct RadiusEstimate {
  double r_hat = 0.0;
  bool failed = false;
  std::size_t pairs = 0;
  cplx witness{0.0, 0.0};      // r-pattern center that did not recur
  cplx witness_big{0.0, 0.0};  // R-pattern center it was missing from
};

/// Smallest R (over sampled pairs) such that every sampled R-ball contains
/// a copy of every sampled r-pattern that is eps-similar (eps-wiggle-similar
/// when options.wiggle). eps == 0 means exact translated copies. The
/// sampled pattern itself never counts as its own copy.
RadiusEstimate repetitivity_radius(const PointSetWindow& p, double r, double eps, const RepetitivityOptions& opt);

/// Distance from big to the nearest acceptable copy of the r-pattern at
/// center c, plus r; nullopt when none fits inside the window.
std::optional<double> copy_radius(const PointSetWindow& p, cplx c, cplx big, double r, double eps, bool wiggle);

struct CurvePoint {
  double r = 0.0;
  double eps = 0.0;
  double r_hat = 0.0;
  std::size_t samples = 0;
  bool failed = false;
};

struct CurveFit {
  double eps = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  double max_ratio = 0.0;  // max R(2r)/R(r) over doublings present
  bool linear = false;
};

struct RepetitivityCurve {
  std::vector<CurvePoint> points;
  std::vector<CurveFit> fits;
  bool failed = false;
};

RepetitivityCurve repetitivity_curve(const PointSetWindow& p, const std::vector<double>& rs,
                                     const std::vector<double>& epss, const RepetitivityOptions& opt);
/// Columns r, eps, R_hat, samples, linear.
std::string curve_csv(const RepetitivityCurve& c);

/// First grid shift x with d_V(P, Q + x) < eps.
std::optional<cplx> locally_indistinguishable(const PointSetWindow& p, const PointSetWindow& q, const Region& v,
                                              double eps, const std::vector<cplx>& grid);

}  // namespace delone

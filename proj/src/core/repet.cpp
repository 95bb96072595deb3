#include "delone/repet.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "delone/parallel.hpp"

namespace delone {

namespace {

double nearest_dist(const PointSetWindow& p, cplx q) { return p.nearest(q).second; }

/// Exact squared distance from q to P, via float candidates.
Gaussian exact_nearest_sq(const PointSetWindow& p, const Gaussian& q) {
  const cplx qf = q.to_complex();
  const double d = nearest_dist(p, qf);
  Gaussian best;
  bool have = false;
  for (std::size_t i : p.within(qf, d * (1 + 1e-9) + 1e-9)) {
    Gaussian n = (p.exact_points()[i] - q).norm();
    if (!have || real_less(n, best)) {
      best = n;
      have = true;
    }
  }
  return best;
}

bool region_contains_exact(const Region& v, const Gaussian& z) {
  if (!v.is_ball) return v.box.contains_exact(z);
  Gaussian r = decimal(v.radius);
  return !real_less(r * r, (z - decimal(v.center.real()) - decimal(v.center.imag()) * Gaussian(0, 1)).norm());
}

/// Exact squared d_V(P + x, P); needs exact P.
Gaussian shifted_deviation_sq_exact(const PointSetWindow& p, const Gaussian& x, const Region& v) {
  const double reach = v.circumradius() * (1 + 1e-9) + 1e-9;
  const cplx xf = x.to_complex();
  Gaussian worst;
  for (std::size_t i : p.within(v.center - xf, reach)) {
    Gaussian a = p.exact_points()[i] + x;
    if (!region_contains_exact(v, a)) continue;
    Gaussian d = exact_nearest_sq(p, a);
    if (real_less(worst, d)) worst = d;
  }
  for (std::size_t i : p.within(v.center, reach)) {
    const Gaussian& b = p.exact_points()[i];
    if (!region_contains_exact(v, b)) continue;
    Gaussian d = exact_nearest_sq(p, b - x);
    if (real_less(worst, d)) worst = d;
  }
  return worst;
}

bool is_dyadic_exact(cplx x) {
  try {
    Gaussian g = dyadic(x.real()) + dyadic(x.imag()) * Gaussian(0, 1);
    return g.to_complex() == x;
  } catch (const std::exception&) {
    return false;
  }
}

Box default_sample_region(const PointSetWindow& p) {
  // known region is frame(window); sample around its center
  Box w = p.window();
  cplx c = p.frame().apply(w.center());
  double hx = (w.hi[0] - w.lo[0]) / 4;
  double hy = w.dim == 2 ? (w.hi[1] - w.lo[1]) / 4 : 0.0;
  double h = p.dim() == 2 ? std::min(hx, hy) : hx;
  if (p.dim() == 1) return Box::interval(c.real() - h, c.real() + h);
  return Box::square(c.real() - h, c.imag() - h, c.real() + h, c.imag() + h);
}

/// Nearest and second-nearest neighbor data per point.
struct NeighborIndex {
  std::vector<double> d1, d2;
  std::vector<cplx> v1;  // vector to the nearest other point

  explicit NeighborIndex(const PointSetWindow& p) : d1(p.size(), kInfinity), d2(p.size(), kInfinity), v1(p.size()) {
    const double start = std::max(4 * p.radius(), 1e-6);
    parallel_for(p.size(), [&](std::size_t i) {
      const cplx z = p.points()[i];
      for (double rad = start; rad < 1e6; rad *= 2) {
        auto near = p.within(z, rad);
        if (near.size() < 3 && rad * 2 < 1e6) continue;
        for (std::size_t j : near) {
          if (j == i) continue;
          double d = std::abs(p.points()[j] - z);
          if (d < d1[i]) {
            d2[i] = d1[i];
            d1[i] = d;
            v1[i] = p.points()[j] - z;
          } else if (d < d2[i]) {
            d2[i] = d;
          }
        }
        break;
      }
    });
  }
};

/// All acceptable copies of one r-pattern in the window.
class CopySearch {
 public:
  CopySearch(const PointSetWindow& p, const NeighborIndex& nb, cplx c, double r, double eps, bool wiggle)
      : p_(p), nb_(nb), c_(c), r_(r), eps_(eps), wiggle_(wiggle && p.dim() == 2) {
    auto [i0, d0] = p.nearest(c);
    if (i0 < 0) throw std::domain_error("empty point set");
    p0_ = static_cast<std::size_t>(i0);
    for (std::size_t j : p.within(c, r)) own_.push_back(p.points()[j]);
    // a fixed scrambled order rejects mismatched candidates within a few lookups
    std::mt19937_64 mix(own_.size());
    std::shuffle(own_.begin(), own_.end(), mix);
    if (eps_ == 0.0) {
      if (!p.is_exact()) throw std::invalid_argument("eps = 0 needs exact points");
      if (d0 != 0.0) throw std::invalid_argument("eps = 0 needs pattern centers on points");
      r2_ = decimal(r) * decimal(r);
      content_ = exact_content(p0_);
    }
  }

  struct Found {
    std::vector<cplx> centers;
    std::vector<std::size_t> anchors;  // q0 of each copy
  };

  /// Copies other than the pattern itself, in index order. With `only`, just
  /// those anchors are tried.
  Found copies(const std::vector<std::size_t>* only = nullptr) const {
    Found out;
    if (!p_.covers_ball(c_, r_ + eps_)) return out;
    const std::size_t n = only ? only->size() : p_.size();
    const std::size_t chunk = 4096;
    std::vector<Found> parts((n + chunk - 1) / chunk);
    parallel_for(parts.size(), [&](std::size_t k) {
      const std::size_t end = std::min(n, (k + 1) * chunk);
      for (std::size_t i = k * chunk; i < end; ++i) {
        const std::size_t q0 = only ? (*only)[i] : i;
        if (q0 == p0_ || !plausible(q0)) continue;
        if (auto x = accepts(q0)) {
          parts[k].centers.push_back(c_ + *x);
          parts[k].anchors.push_back(q0);
        }
      }
    });
    for (const auto& part : parts) {
      out.centers.insert(out.centers.end(), part.centers.begin(), part.centers.end());
      out.anchors.insert(out.anchors.end(), part.anchors.begin(), part.anchors.end());
    }
    return out;
  }

 private:
  bool unique_nearest(std::size_t i) const { return nb_.d2[i] - nb_.d1[i] > 1e-7 * std::max(1.0, nb_.d1[i]); }

  /// Cheap necessary conditions on the neighbor data.
  bool plausible(std::size_t q0) const {
    const double a = nb_.d1[p0_], b = nb_.d1[q0];
    if (eps_ == 0.0) {
      const double tol = 1e-9 * std::max(1.0, a);
      return std::abs(a - b) <= tol && std::abs(nb_.d2[p0_] - nb_.d2[q0]) <= tol;
    }
    // wiggle copies are aligned on congruent neighbor pairs
    if (wiggle_) {
      const double tol = 1e-9 * std::max(1.0, a);
      if (std::abs(a - b) > tol || std::abs(nb_.d2[p0_] - nb_.d2[q0]) > tol) return false;
      if (unique_nearest(p0_) && unique_nearest(q0)) return std::abs(std::arg(nb_.v1[p0_] / nb_.v1[q0])) < 2 * eps_;
      return true;
    }
    if (std::abs(a - b) >= 2 * eps_) return false;
    if (!wiggle_ && unique_nearest(p0_) && unique_nearest(q0) && nb_.d2[p0_] - nb_.d1[p0_] > 4 * eps_ &&
        nb_.d2[q0] - nb_.d1[q0] > 4 * eps_)
      return std::abs(nb_.v1[p0_] - nb_.v1[q0]) < 2 * eps_;
    return true;
  }

  std::vector<Gaussian> exact_content(std::size_t i) const {
    const Gaussian& ci = p_.exact_points()[i];
    std::vector<Gaussian> out;
    for (std::size_t j : p_.within(p_.points()[i], r_ * (1 + 1e-9) + 1e-9)) {
      Gaussian off = p_.exact_points()[j] - ci;
      if (!real_less(r2_, off.norm())) out.push_back(off);
    }
    std::sort(out.begin(), out.end(), lex_less);
    return out;
  }

  /// d_{B_r(c)}(rot_theta(P - x), P), abandoning once above `limit`. The
  /// pattern's own points go first.
  double deviation(cplx x, double theta, double limit, std::vector<cplx>* offsets) const {
    const cplx rot = std::polar(1.0, theta);
    const cplx back = std::conj(rot);
    double worst = 0.0;
    for (const cplx& b : own_) {
      cplx q = c_ + back * (b - c_) + x;
      auto [k, d] = p_.nearest(q);
      worst = std::max(worst, d);
      if (offsets) offsets->push_back(rot * (q - p_.points()[k]));
      if (worst >= limit) return worst;
    }
    for (std::size_t j : p_.within(c_ + x, r_)) {
      cplx a = c_ + rot * (p_.points()[j] - x - c_);
      auto [k, d] = p_.nearest(a);
      worst = std::max(worst, d);
      if (offsets) offsets->push_back(p_.points()[k] - a);
      if (worst >= limit) return worst;
    }
    return worst;
  }

  bool fits(cplx x) const { return p_.covers_ball(c_ + x, r_ + eps_); }

  /// Shift of an acceptable copy aligned on q0.
  std::optional<cplx> accepts(std::size_t q0) const {
    const cplx x = p_.points()[q0] - p_.points()[p0_];
    if ((!wiggle_ || eps_ == 0.0) && !fits(x)) return std::nullopt;
    if (eps_ == 0.0) {
      if (deviation(x, 0.0, 1e-9, nullptr) >= 1e-9) return std::nullopt;
      if (exact_content(q0) == content_) return x;
      return std::nullopt;
    }
    if (!wiggle_) {
      double d = deviation(x, 0.0, eps_, nullptr);
      if (d < eps_) return x;
      if (d > 3 * eps_) return std::nullopt;
      // recentre the shift on the midrange of the partner offsets
      std::vector<cplx> off;
      deviation(x, 0.0, kInfinity, &off);
      if (off.empty()) return std::nullopt;
      double x0 = off[0].real(), x1 = x0, y0 = off[0].imag(), y1 = y0;
      for (const auto& o : off) {
        x0 = std::min(x0, o.real());
        x1 = std::max(x1, o.real());
        y0 = std::min(y0, o.imag());
        y1 = std::max(y1, o.imag());
      }
      const cplx y = x - cplx{(x0 + x1) / 2, (y0 + y1) / 2};
      if (fits(y) && deviation(y, 0.0, eps_, nullptr) < eps_) return y;
      return std::nullopt;
    }
    // the rotation is about c, so the shift putting p0 onto q0 depends on it
    const cplx qq = p_.points()[q0];
    const cplx pc = p_.points()[p0_] - c_;
    auto try_angle = [&](cplx w) -> std::optional<cplx> {
      double theta = std::arg(nb_.v1[p0_] / w);
      double cost = std::abs(theta) / 2;
      if (cost >= eps_) return std::nullopt;
      const cplx xt = qq - c_ - std::polar(1.0, -theta) * pc;
      if (!fits(xt) || std::max(deviation(xt, theta, eps_, nullptr), cost) >= eps_) return std::nullopt;
      return xt;
    };
    if (unique_nearest(p0_) && unique_nearest(q0)) return try_angle(nb_.v1[q0]);
    for (std::size_t j : p_.within(qq, nb_.d1[p0_] + eps_)) {
      if (j == q0) continue;
      cplx w = p_.points()[j] - qq;
      if (std::abs(std::abs(w) - nb_.d1[p0_]) >= eps_) continue;
      if (auto xt = try_angle(w)) return xt;
    }
    return std::nullopt;
  }

  const PointSetWindow& p_;
  const NeighborIndex& nb_;
  cplx c_;
  double r_;
  double eps_;
  bool wiggle_;
  std::size_t p0_ = 0;
  Gaussian r2_;
  std::vector<Gaussian> content_;
  std::vector<cplx> own_;
};

/// Smallest |copy - big| + r within r_max.
std::optional<double> nearest_copy(const std::vector<cplx>& copies, cplx big, double r, double r_max) {
  double best = kInfinity;
  for (const auto& z : copies) best = std::min(best, std::abs(z - big) + r);
  if (best > r_max) return std::nullopt;
  return best;
}

struct Centers {
  std::vector<cplx> small;
  std::vector<cplx> big;
};

Centers sample_centers(const PointSetWindow& p, const RepetitivityOptions& opt) {
  Centers out;
  if (!opt.r_center_list.empty()) out.small = opt.r_center_list;
  if (!opt.big_center_list.empty()) out.big = opt.big_center_list;
  const Box region = opt.sample_region ? *opt.sample_region : default_sample_region(p);
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (out.small.empty()) {
    std::vector<cplx> pool;
    for (const auto& q : p.points())
      if (region.contains(q)) pool.push_back(q);
    if (pool.empty()) throw std::domain_error("no points in the sample region");
    for (std::size_t i = 0; i < opt.r_centers; ++i) out.small.push_back(pool[rng() % pool.size()]);
  }
  if (out.big.empty()) {
    for (std::size_t i = 0; i < opt.big_centers; ++i) {
      double x = region.lo[0] + unit(rng) * (region.hi[0] - region.lo[0]);
      double y = region.dim == 2 ? region.lo[1] + unit(rng) * (region.hi[1] - region.lo[1]) : 0.0;
      out.big.push_back({x, y});
    }
  }
  return out;
}

}  // namespace

double shifted_deviation(const PointSetWindow& p, cplx x, const Region& v) {
  const double reach = v.circumradius() * (1 + 1e-12) + 1e-12;
  double worst = 0.0;
  for (std::size_t i : p.within(v.center - x, reach)) {
    cplx a = p.points()[i] + x;
    if (v.contains(a)) worst = std::max(worst, nearest_dist(p, a));
  }
  for (std::size_t i : p.within(v.center, reach)) {
    cplx b = p.points()[i];
    if (v.contains(b)) worst = std::max(worst, nearest_dist(p, b - x));
  }
  return worst;
}

std::vector<cplx> integer_grid(int dim, std::int64_t lo, std::int64_t hi) {
  std::vector<cplx> out;
  for (std::int64_t a = lo; a <= hi; ++a) {
    if (dim == 1) {
      out.push_back({static_cast<double>(a), 0.0});
      continue;
    }
    for (std::int64_t b = lo; b <= hi; ++b) out.push_back({static_cast<double>(a), static_cast<double>(b)});
  }
  return out;
}

double max_gap(const std::vector<cplx>& shifts, const Box& region) {
  if (shifts.empty()) return kInfinity;
  auto dist = [&](cplx y) {
    double best = kInfinity;
    for (const auto& s : shifts) best = std::min(best, std::abs(y - s));
    return best;
  };
  if (region.dim == 1) {
    std::vector<double> xs;
    for (const auto& s : shifts) xs.push_back(s.real());
    std::sort(xs.begin(), xs.end());
    double worst = std::max(dist({region.lo[0], 0.0}), dist({region.hi[0], 0.0}));
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      double mid = (xs[i] + xs[i + 1]) / 2;
      if (mid >= region.lo[0] && mid <= region.hi[0]) worst = std::max(worst, (xs[i + 1] - xs[i]) / 2);
    }
    return worst;
  }
  // planar: the farthest point lies on a fine grid up to one half-diagonal
  const int n = 128;
  double worst = 0.0;
  for (int a = 0; a <= n; ++a) {
    for (int b = 0; b <= n; ++b) {
      cplx y{region.lo[0] + (region.hi[0] - region.lo[0]) * a / n, region.lo[1] + (region.hi[1] - region.lo[1]) * b / n};
      worst = std::max(worst, dist(y));
    }
  }
  return worst;
}

PeriodSet period_set(const PointSetWindow& p, double eps, PeriodMode mode, const std::optional<Region>& v,
                     const std::vector<cplx>& grid, const Box& region) {
  if (!(eps > 0)) throw std::invalid_argument("eps must be positive");
  if (mode == PeriodMode::V && !v) throw std::invalid_argument("mode V needs a region");
  double reach = 0.0;
  for (const auto& x : grid) reach = std::max(reach, std::abs(x));
  if (mode == PeriodMode::V) {
    if (!p.covers_ball(v->center, v->circumradius() + reach + std::min(eps, 1.0)))
      throw std::domain_error("insufficient margin: window must cover V plus the largest shift");
  } else if (eps <= kLrCap) {
    if (!p.covers_ball({0.0, 0.0}, 1.0 / eps + reach)) throw std::domain_error("insufficient margin: window must cover B(1/eps) plus the largest shift");
  }

  std::vector<char> ok(grid.size(), 0);
  const bool exact = mode == PeriodMode::V && p.is_exact();
  const Gaussian eps_sq = exact ? decimal(eps) * decimal(eps) : Gaussian();
  parallel_for(grid.size(), [&](std::size_t i) {
    const cplx x = grid[i];
    if (mode == PeriodMode::V) {
      if (exact && is_dyadic_exact(x)) {
        Gaussian xe = dyadic(x.real()) + dyadic(x.imag()) * Gaussian(0, 1);
        ok[i] = real_less(shifted_deviation_sq_exact(p, xe, *v), eps_sq);
      } else {
        ok[i] = shifted_deviation(p, x, *v) < eps;
      }
      return;
    }
    if (eps > kLrCap) {
      ok[i] = 1;
      return;
    }
    ok[i] = local_rubber_distance(p.translated(x), p).value < eps;
  });

  PeriodSet out;
  out.eps = eps;
  out.mode = mode;
  out.region = region;
  out.tested = grid.size();
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (ok[i]) out.shifts.push_back(grid[i]);
  out.max_gap = max_gap(out.shifts, region);
  return out;
}

std::optional<double> copy_radius(const PointSetWindow& p, cplx c, cplx big, double r, double eps, bool wiggle) {
  NeighborIndex nb(p);
  CopySearch s(p, nb, c, r, eps, wiggle);
  return nearest_copy(s.copies().centers, big, r, p.coverage_radius(big) - eps);
}

namespace {

/// Accepted anchors per r-center; nullopt means not computed.
using AnchorCache = std::vector<std::optional<std::vector<std::size_t>>>;

/// `narrow` restricts each r-center's search to anchors accepted earlier, and
/// `found` receives this run's anchors.
RadiusEstimate radius_with(const PointSetWindow& p, const NeighborIndex& nb, double r, double eps,
                           const RepetitivityOptions& opt, const AnchorCache* narrow = nullptr,
                           AnchorCache* found_out = nullptr) {
  if (!(r > 0)) throw std::invalid_argument("r must be positive");
  if (eps < 0) throw std::invalid_argument("eps must be nonnegative");
  const Centers ctr = sample_centers(p, opt);
  std::vector<double> r_max(ctr.big.size());
  for (std::size_t b = 0; b < ctr.big.size(); ++b) r_max[b] = p.coverage_radius(ctr.big[b]) - eps;

  RadiusEstimate out;
  if (found_out) found_out->assign(ctr.small.size(), std::nullopt);
  // one r-pattern at a time, so the first failing pair is the same for any thread count
  for (std::size_t a = 0; a < ctr.small.size(); ++a) {
    CopySearch search(p, nb, ctr.small[a], r, eps, opt.wiggle);
    const std::vector<std::size_t>* only = narrow && (*narrow)[a] ? &*(*narrow)[a] : nullptr;
    auto found = search.copies(only);
    std::vector<double> need(ctr.big.size(), kInfinity);
    parallel_for(ctr.big.size(), [&](std::size_t b) {
      if (auto got = nearest_copy(found.centers, ctr.big[b], r, r_max[b])) need[b] = *got;
    });
    if (found_out) (*found_out)[a] = std::move(found.anchors);
    for (std::size_t b = 0; b < ctr.big.size(); ++b) {
      ++out.pairs;
      if (!std::isfinite(need[b])) {
        out.failed = true;
        out.r_hat = kInfinity;
        out.witness = ctr.small[a];
        out.witness_big = ctr.big[b];
        return out;
      }
      out.r_hat = std::max(out.r_hat, need[b]);
    }
  }
  return out;
}

}  // namespace

RadiusEstimate repetitivity_radius(const PointSetWindow& p, double r, double eps, const RepetitivityOptions& opt) {
  NeighborIndex nb(p);
  return radius_with(p, nb, r, eps, opt);
}

RepetitivityCurve repetitivity_curve(const PointSetWindow& p, const std::vector<double>& rs,
                                     const std::vector<double>& epss, const RepetitivityOptions& opt) {
  RepetitivityCurve out;
  const NeighborIndex nb(p);
  std::vector<double> sorted_r = rs;
  std::sort(sorted_r.begin(), sorted_r.end());
  // With wiggle, a copy of a bigger pattern at smaller tolerance is also a copy
  // of the smaller one, so each search only retries anchors found before.
  std::vector<std::size_t> eps_order(epss.size());
  std::iota(eps_order.begin(), eps_order.end(), std::size_t{0});
  std::stable_sort(eps_order.begin(), eps_order.end(), [&](std::size_t a, std::size_t b) { return epss[a] > epss[b]; });
  std::vector<std::vector<CurvePoint>> by_eps(epss.size());
  AnchorCache first_r;
  for (std::size_t j : eps_order) {
    const double eps = epss[j];
    double running = 0.0;
    std::vector<CurvePoint>& pts = by_eps[j];
    AnchorCache prev = opt.wiggle ? first_r : AnchorCache{};
    for (std::size_t k = 0; k < sorted_r.size(); ++k) {
      AnchorCache got;
      RadiusEstimate est = radius_with(p, nb, sorted_r[k], eps, opt, opt.wiggle && !prev.empty() ? &prev : nullptr,
                                       opt.wiggle ? &got : nullptr);
      if (opt.wiggle) {
        if (k == 0) first_r = got;
        prev = std::move(got);
      }
      running = std::max(running, est.r_hat);
      pts.push_back({sorted_r[k], eps, running, est.pairs, est.failed});
      if (est.failed) out.failed = true;
    }
  }
  for (std::size_t j = 0; j < epss.size(); ++j) {
    const double eps = epss[j];
    const std::vector<CurvePoint>& pts = by_eps[j];
    CurveFit fit;
    fit.eps = eps;
    // least squares over the finite samples
    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& q : pts) {
      if (!std::isfinite(q.r_hat)) continue;
      n += 1;
      sx += q.r;
      sy += q.r_hat;
      sxx += q.r * q.r;
      sxy += q.r * q.r_hat;
    }
    if (n >= 2 && n * sxx - sx * sx != 0) {
      fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      fit.intercept = (sy - fit.slope * sx) / n;
    } else if (n == 1) {
      fit.intercept = sy;
    }
    bool any_failed = false;
    for (const auto& a : pts) {
      any_failed = any_failed || a.failed;
      for (const auto& b : pts) {
        if (b.r == 2 * a.r) fit.max_ratio = std::max(fit.max_ratio, b.r_hat / a.r_hat);
      }
    }
    fit.linear = !any_failed && fit.max_ratio <= 2.5;
    out.fits.push_back(fit);
    out.points.insert(out.points.end(), pts.begin(), pts.end());
  }
  return out;
}

std::string curve_csv(const RepetitivityCurve& c) {
  auto num = [](double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
  };
  std::ostringstream os;
  os << "r,eps,R_hat,samples,linear\r\n";
  for (const auto& q : c.points) {
    bool linear = false;
    for (const auto& f : c.fits)
      if (f.eps == q.eps) linear = f.linear;
    os << num(q.r) << ',' << num(q.eps) << ',';
    if (std::isfinite(q.r_hat))
      os << num(q.r_hat);
    else
      os << "inf";
    os << ',' << q.samples << ',' << (linear ? "true" : "false") << "\r\n";
  }
  return os.str();
}

std::optional<cplx> locally_indistinguishable(const PointSetWindow& p, const PointSetWindow& q, const Region& v,
                                              double eps, const std::vector<cplx>& grid) {
  for (const auto& x : grid) {
    if (pattern_deviation(p, q.translated(x), v) < eps) return x;
  }
  return std::nullopt;
}

}  // namespace delone

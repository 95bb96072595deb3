#include "delone/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_set>

namespace delone {

bool Region::contains(cplx p) const {
  if (is_ball) return std::abs(p - center) <= radius;
  return box.contains(p);
}

double Region::circumradius() const {
  if (is_ball) return radius;
  double hx = (box.hi[0] - box.lo[0]) / 2;
  double hy = box.dim == 2 ? (box.hi[1] - box.lo[1]) / 2 : 0.0;
  return std::hypot(hx, hy);
}

Region Region::translated(cplx x) const {
  Region r = *this;
  r.center += x;
  if (!is_ball) {
    r.box.lo[0] += x.real();
    r.box.hi[0] += x.real();
    if (box.dim == 2) {
      r.box.lo[1] += x.imag();
      r.box.hi[1] += x.imag();
    }
  }
  return r;
}

namespace {

std::vector<std::size_t> in_region(const PointSetWindow& p, const Region& v) {
  std::vector<std::size_t> out;
  for (std::size_t i : p.within(v.center, v.circumradius() * (1 + 1e-12) + 1e-12)) {
    if (v.contains(p.points()[i])) out.push_back(i);
  }
  return out;
}

double one_side(const PointSetWindow& a, const PointSetWindow& b, const Region& v, bool& met) {
  double worst = 0.0;
  for (std::size_t i : in_region(a, v)) {
    met = true;
    worst = std::max(worst, b.nearest(a.points()[i]).second);
  }
  return worst;
}

}  // namespace

double pattern_deviation(const PointSetWindow& p, const PointSetWindow& q, const Region& v) {
  bool met_p = false, met_q = false;
  double a = one_side(p, q, v, met_p);
  double b = one_side(q, p, v, met_q);
  if ((met_p && q.empty()) || (met_q && p.empty())) return kInfinity;
  return std::max(a, b);
}

double pattern_deviation(const std::vector<cplx>& p, const std::vector<cplx>& q, const Region& v) {
  auto side = [&](const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double worst = 0.0;
    for (const auto& x : a) {
      if (!v.contains(x)) continue;
      double best = kInfinity;
      for (const auto& y : b) best = std::min(best, std::abs(x - y));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(side(p, q), side(q, p));
}

std::optional<Gaussian> pattern_deviation_sq_exact(const PointSetWindow& p, const PointSetWindow& q, const Region& v) {
  if (!p.is_exact() || !q.is_exact()) throw std::invalid_argument("exact deviation needs exact point sets");
  Gaussian worst(0);
  auto side = [&](const PointSetWindow& a, const PointSetWindow& b) -> bool {
    for (std::size_t i : in_region(a, v)) {
      const Gaussian& x = a.exact_points()[i];
      auto [idx, d] = b.nearest(a.points()[i]);
      if (idx < 0) return false;
      std::optional<Gaussian> best;
      for (std::size_t j : b.within(a.points()[i], d * (1 + 1e-9) + 1e-12)) {
        Gaussian n = (b.exact_points()[j] - x).norm();
        if (!best || real_less(n, *best)) best = n;
      }
      if (best && real_less(worst, *best)) worst = *best;
    }
    return true;
  };
  if (!side(p, q) || !side(q, p)) return std::nullopt;
  return worst;
}

bool deviation_margin_ok(const PointSetWindow& p, const PointSetWindow& q, const Region& v, double value) {
  double need = v.circumradius() + (std::isfinite(value) ? value : 0.0);
  return p.covers_ball(v.center, need) && q.covers_ball(v.center, need);
}

// ---- d_LR -----------------------------------------------------------------

namespace {

/// Same points over the same known region: treated as the same set.
bool same_window(const PointSetWindow& p, const PointSetWindow& q) {
  const auto& a = p.window();
  const auto& b = q.window();
  const auto& f = p.frame();
  const auto& g = q.frame();
  return p.dim() == q.dim() && a.dim == b.dim && a.lo == b.lo && a.hi == b.hi && f.shift == g.shift &&
         f.unit == g.unit && f.reflect == g.reflect && p.points() == q.points();
}

}  // namespace

LrResult local_rubber_distance(const PointSetWindow& p, const PointSetWindow& q) {
  if (same_window(p, q)) return {};
  const cplx o{0.0, 0.0};
  const double reach = std::min(p.coverage_radius(o), q.coverage_radius(o)) - kLrCap;
  LrResult res;
  if (reach <= std::sqrt(2.0)) {
    res.value = kLrCap;
    res.window_limited = true;
    return res;
  }
  // (|x|, distance to the other set) for points of both sets near the origin
  std::vector<std::pair<double, double>> rows;
  for (const auto& pair : {std::make_pair(&p, &q), std::make_pair(&q, &p)}) {
    const auto& a = *pair.first;
    const auto& b = *pair.second;
    for (std::size_t i : a.within(o, reach)) {
      rows.emplace_back(std::abs(a.points()[i]), b.nearest(a.points()[i]).second);
    }
  }
  std::sort(rows.begin(), rows.end());
  std::vector<double> norms(rows.size()), prefix(rows.size());
  double m = 0.0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    norms[k] = rows[k].first;
    m = std::max(m, rows[k].second);
    prefix[k] = m;
  }
  auto holds = [&](double eps) {
    // points in the open ball of radius 1/eps need a partner closer than eps
    std::size_t n = std::lower_bound(norms.begin(), norms.end(), 1.0 / eps) - norms.begin();
    return n == 0 || prefix[n - 1] < eps;
  };
  double lo = 1.0 / reach;
  double hi = kLrCap;
  if (!holds(hi)) {
    res.value = kLrCap;
    return res;
  }
  if (holds(lo)) {
    res.value = lo;
    res.window_limited = true;
    return res;
  }
  while (hi - lo > 1e-9) {
    double mid = (lo + hi) / 2;
    if (holds(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  res.value = hi;
  return res;
}

// ---- d_LM -----------------------------------------------------------------

namespace {

struct Agreement {
  double rho;
  bool limited;
};

/// Radius of the largest open ball about the origin where (x + A) and B agree.
Agreement agreement_radius(const PointSetWindow& a, const PointSetWindow& b, cplx x,
                           const std::unordered_set<Gaussian, GaussianHash>* aset,
                           const std::unordered_set<Gaussian, GaussianHash>* bset, const Gaussian* xe) {
  const double cov = std::max(0.0, std::min(a.coverage_radius(-x), b.coverage_radius({0.0, 0.0})));
  // grow the search radius until a mismatch shows up
  for (double r = std::min(2.0, cov);; r = std::min(2 * r, cov)) {
    double rho = kInfinity;
    for (std::size_t j : b.within({0.0, 0.0}, r)) {
      bool found;
      if (xe != nullptr) {
        found = aset->count(b.exact_points()[j] - *xe) > 0;
      } else {
        found = a.nearest(b.points()[j] - x).second <= 1e-9;
      }
      if (!found) rho = std::min(rho, std::abs(b.points()[j]));
    }
    for (std::size_t i : a.within(-x, r)) {
      bool found;
      if (xe != nullptr) {
        found = bset->count(a.exact_points()[i] + *xe) > 0;
      } else {
        found = b.nearest(a.points()[i] + x).second <= 1e-9;
      }
      if (!found) rho = std::min(rho, std::abs(a.points()[i] + x));
    }
    if (rho <= r) return {rho, false};
    if (r >= cov) return {cov, true};
  }
}

struct DirBound {
  double lower;
  double upper;
};

DirBound direction(const PointSetWindow& a, const PointSetWindow& b, const std::vector<cplx>& custom, bool exact) {
  std::unordered_set<Gaussian, GaussianHash> aset, bset;
  if (exact) {
    aset.insert(a.exact_points().begin(), a.exact_points().end());
    bset.insert(b.exact_points().begin(), b.exact_points().end());
  }
  std::vector<cplx> cands;
  std::vector<Gaussian> cands_e;
  if (custom.empty()) {
    cands.push_back({0.0, 0.0});
    if (exact) cands_e.emplace_back(0);
    for (std::size_t j : b.within({0.0, 0.0}, std::sqrt(2.0))) {
      for (std::size_t i : a.within(b.points()[j], kLrCap)) {
        cands.push_back(b.points()[j] - a.points()[i]);
        if (exact) cands_e.push_back(b.exact_points()[j] - a.exact_points()[i]);
      }
    }
  } else {
    cands = custom;
  }
  DirBound out{kLrCap, kLrCap};
  for (std::size_t c = 0; c < cands.size(); ++c) {
    const double nx = std::abs(cands[c]);
    if (nx >= kLrCap) continue;
    const Gaussian* xe = (exact && custom.empty()) ? &cands_e[c] : nullptr;
    Agreement ag = agreement_radius(a, b, cands[c], &aset, &bset, xe);
    double up = ag.rho > 0 ? std::max(nx, 1.0 / ag.rho) : kInfinity;
    double lowc = ag.limited ? nx : up;
    out.upper = std::min(out.upper, up);
    out.lower = std::min(out.lower, lowc);
  }
  return out;
}

}  // namespace

LmBracket local_matching_distance(const PointSetWindow& p, const PointSetWindow& q, const std::vector<cplx>& candidates) {
  if (p.dim() != q.dim()) throw std::invalid_argument("dimension mismatch");
  const bool exact = p.is_exact() && q.is_exact();
  if (same_window(p, q)) return {0.0, 0.0, exact && candidates.empty()};
  DirBound d1 = direction(p, q, candidates, exact);  // x P vs Q
  DirBound d2 = direction(q, p, candidates, exact);  // P vs x' Q
  LmBracket out;
  out.upper = std::min(kLrCap, std::max(d1.upper, d2.upper));
  out.lower = std::min(kLrCap, std::max(d1.lower, d2.lower));
  out.certified = exact && candidates.empty();
  if (!out.certified) out.lower = 0.0;
  if (exact && candidates.empty() && q.within({0.0, 0.0}, std::sqrt(2.0)).empty()) out.lower = 0.0;
  return out;
}

// ---- wiggle -----------------------------------------------------------------

namespace {

cplx rotate_about(cplx z, cplx c, cplx u) { return u == cplx(1.0, 0.0) ? z : c + u * (z - c); }

double rotated_deviation(const PointSetWindow& p, const PointSetWindow& q, const Region& b, double th, double thp) {
  const cplx up = std::polar(1.0, th), uq = std::polar(1.0, thp);
  const double reach = b.circumradius() * (1 + 1e-12) + 1e-12;
  double worst = 0.0;
  bool met_p = false, met_q = false;
  for (std::size_t i : p.within(b.center, reach)) {
    cplx a = rotate_about(p.points()[i], b.center, up);
    if (!b.contains(a)) continue;
    met_p = true;
    worst = std::max(worst, q.nearest(rotate_about(a, b.center, std::conj(uq))).second);
  }
  for (std::size_t j : q.within(b.center, reach)) {
    cplx a = rotate_about(q.points()[j], b.center, uq);
    if (!b.contains(a)) continue;
    met_q = true;
    worst = std::max(worst, p.nearest(rotate_about(a, b.center, std::conj(up))).second);
  }
  if ((met_p && q.empty()) || (met_q && p.empty())) return kInfinity;
  return worst;
}

}  // namespace

WiggleResult wiggle_deviation(const PointSetWindow& p, const PointSetWindow& q, const Region& b, double step) {
  if (p.dim() != 2 || q.dim() != 2) throw std::invalid_argument("wiggle deviation needs dimension 2");
  if (!(step > 0)) throw std::invalid_argument("angle step must be positive");
  WiggleResult best;
  best.upper = rotated_deviation(p, q, b, 0.0, 0.0);
  if (b.is_ball) {
    // only the relative angle matters; split it evenly
    for (int k = 1; k * step / 2 < best.upper && k * step <= 2 * 3.141592653589793; ++k) {
      for (int s : {1, -1}) {
        double phi = s * k * step;
        double v = std::max(rotated_deviation(p, q, b, phi / 2, -phi / 2), std::abs(phi) / 2);
        if (v < best.upper) best = {v, 0.0, phi / 2, -phi / 2};
      }
    }
  } else {
    for (int k = 0; k * step < best.upper; ++k) {
      for (int l = 0; l * step < best.upper && k * step < best.upper; ++l) {
        for (int s : {1, -1}) {
          for (int t : {1, -1}) {
            double th = s * k * step, thp = t * l * step;
            double v = std::max({rotated_deviation(p, q, b, th, thp), std::abs(th), std::abs(thp)});
            if (v < best.upper) best = {v, 0.0, th, thp};
          }
        }
      }
    }
  }
  best.lower = std::max(0.0, best.upper - b.circumradius() * step - step / 2);
  return best;
}

// ---- classification ---------------------------------------------------------

std::vector<cplx> pattern_content(const PointSetWindow& p, cplx c, const Region& shape) {
  std::vector<cplx> out;
  Region v = shape.translated(c);
  for (std::size_t i : p.within(v.center, v.circumradius() * (1 + 1e-12) + 1e-12)) {
    if (v.contains(p.points()[i])) out.push_back(p.points()[i] - c);
  }
  return out;
}

namespace {

struct Cover {
  double x0, y0, h;
  std::int64_t nx, ny;
};

Cover make_cover(const Region& shape, double eps, int dim) {
  double r = shape.circumradius();
  double x0 = shape.is_ball ? shape.center.real() - r : shape.box.lo[0];
  double x1 = shape.is_ball ? shape.center.real() + r : shape.box.hi[0];
  double y0 = 0.0, y1 = 0.0;
  if (dim == 2) {
    y0 = shape.is_ball ? shape.center.imag() - r : shape.box.lo[1];
    y1 = shape.is_ball ? shape.center.imag() + r : shape.box.hi[1];
  }
  Cover c;
  c.h = 0.999 * eps / std::sqrt(static_cast<double>(dim));
  c.x0 = x0;
  c.y0 = y0;
  c.nx = static_cast<std::int64_t>(std::floor((x1 - x0) / c.h)) + 1;
  c.ny = dim == 2 ? static_cast<std::int64_t>(std::floor((y1 - y0) / c.h)) + 1 : 1;
  if (c.nx * c.ny > (std::int64_t{1} << 32)) throw std::domain_error("cover too fine for the shape");
  return c;
}

}  // namespace

std::size_t cover_size(const Region& shape, double eps, int dim) {
  Cover c = make_cover(shape, eps, dim);
  return static_cast<std::size_t>(c.nx * c.ny);
}

std::vector<SimilarityClass> classify_patterns(const PointSetWindow& p, const Region& shape, double eps,
                                               const std::vector<cplx>& centers) {
  if (eps < 0) throw std::invalid_argument("eps must be >= 0");
  if (eps == 0) throw std::invalid_argument("eps = 0 needs exact data; use classify_patterns_exact");
  Cover cov = make_cover(shape, eps, p.dim());
  std::map<std::vector<std::uint32_t>, std::size_t> index;
  std::vector<SimilarityClass> out;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    std::vector<std::uint32_t> type;
    for (const auto& z : pattern_content(p, centers[c], shape)) {
      auto ix = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor((z.real() - cov.x0) / cov.h)), 0, cov.nx - 1);
      auto iy = p.dim() == 2
                    ? std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor((z.imag() - cov.y0) / cov.h)), 0, cov.ny - 1)
                    : 0;
      type.push_back(static_cast<std::uint32_t>(iy * cov.nx + ix));
    }
    std::sort(type.begin(), type.end());
    type.erase(std::unique(type.begin(), type.end()), type.end());
    auto [it, fresh] = index.try_emplace(type, out.size());
    if (fresh) out.push_back({type, {}});
    out[it->second].members.push_back(c);
  }
  return out;
}

std::vector<SimilarityClass> classify_patterns_exact(const PointSetWindow& p, const Region& shape,
                                                     const std::vector<Gaussian>& centers) {
  if (!p.is_exact()) throw std::invalid_argument("eps = 0 classification on floating data");
  auto vec_less = [](const std::vector<Gaussian>& a, const std::vector<Gaussian>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), lex_less);
  };
  std::map<std::vector<Gaussian>, std::size_t, decltype(vec_less)> index(vec_less);
  std::vector<SimilarityClass> out;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const cplx cf = centers[c].to_complex();
    Region v = shape.translated(cf);
    std::vector<Gaussian> key;
    for (std::size_t i : p.within(v.center, v.circumradius() * (1 + 1e-12) + 1e-12)) {
      if (v.contains(p.points()[i])) key.push_back(p.exact_points()[i] - centers[c]);
    }
    std::sort(key.begin(), key.end(), lex_less);
    auto [it, fresh] = index.try_emplace(key, out.size());
    if (fresh) out.push_back({{static_cast<std::uint32_t>(out.size())}, {}});
    out[it->second].members.push_back(c);
  }
  return out;
}

}  // namespace delone

#include "delone/decorate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace delone {

namespace {

bool tile_order(const Tile& a, const Tile& b) {
  if (a.type != b.type) return a.type < b.type;
  if (a.g.shift != b.g.shift) return lex_less(a.g.shift, b.g.shift);
  if (a.g.unit != b.g.unit) return lex_less(a.g.unit, b.g.unit);
  return a.g.reflect < b.g.reflect;
}

std::vector<Gaussian> sorted_set(std::vector<Gaussian> v) {
  std::sort(v.begin(), v.end(), lex_less);
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

/// Number of linear isometries about the centroid mapping the set onto itself.
std::size_t symmetry_count(const std::vector<Gaussian>& pts) {
  const auto set = sorted_set(pts);
  Gaussian c;
  for (const auto& p : set) c += p;
  c = c / Gaussian(static_cast<std::int64_t>(set.size()));
  const Gaussian* anchor = nullptr;
  for (const auto& p : set) {
    if (p != c) {
      anchor = &p;
      break;
    }
  }
  if (anchor == nullptr) return 1;
  Gaussian a = *anchor - c;
  std::size_t count = 0;
  for (bool reflect : {false, true}) {
    for (const auto& q : set) {
      Gaussian b = q - c;
      if (b.norm() != a.norm()) continue;
      Gaussian u = b / (reflect ? a.conj() : a);
      ExactMotion m{c - u * (reflect ? c.conj() : c), u, reflect};
      std::vector<Gaussian> img;
      for (const auto& p : set) img.push_back(m.apply(p));
      if (sorted_set(img) == set) ++count;
    }
  }
  return count;
}

double inscribed_radius(const Prototile& p) { return boundary_distance(p.y.to_complex(), to_float(p.outline)); }

}  // namespace

Decoration build_decoration(const SubstitutionRule& rule) {
  Decoration dec;
  const auto m = static_cast<std::int64_t>(rule.prototiles.size());
  double rho_min = 1e300;
  for (const auto& p : rule.prototiles) {
    if (p.y != Gaussian(0)) throw std::domain_error("prototile frame must put y at the origin");
    for (const auto& h : p.symmetries) {
      if (h.shift != Gaussian(0)) throw std::domain_error("symmetry group has no common fixed point at y");
    }
    rho_min = std::min(rho_min, inscribed_radius(p));
  }
  if (!(rho_min > 0)) throw std::domain_error("y is not interior");
  // largest multiple of 1/64 not above half the inscribed radius
  auto d64 = static_cast<std::int64_t>(std::floor(rho_min / 2.0 * 64.0));
  if (d64 <= 0) throw std::domain_error("decoration scale search failed");
  dec.D = Gaussian::rational(d64, 64);
  dec.scale = dec.D / Gaussian(2 * m);

  double intra_min = 1e300;
  for (std::int64_t idx = 1; idx <= m; ++idx) {
    const auto& proto = rule.prototiles[idx - 1];
    std::vector<Gaussian> pts = {Gaussian(0)};
    std::vector<Gaussian> orbit;
    for (const auto& h : proto.symmetries) orbit.push_back(h.apply(Gaussian(1)));
    orbit = sorted_set(orbit);
    for (const auto& e : orbit) pts.push_back(Gaussian::rational(idx, 2 * m + 1) * e);
    for (const auto& e : orbit) pts.push_back(Gaussian(idx) * e);
    pts = sorted_set(pts);
    bool marked = false;
    if (symmetry_count(pts) > proto.symmetries.size()) {
      pts.push_back(Gaussian(idx, idx, 2));
      pts = sorted_set(pts);
      marked = true;
      if (symmetry_count(pts) > proto.symmetries.size()) throw std::domain_error("decoration keeps extra symmetry");
    }
    for (auto& p : pts) p = dec.scale * p;
    for (const auto& h : proto.symmetries) {
      std::vector<Gaussian> img;
      for (const auto& p : pts) img.push_back(h.apply(p));
      if (sorted_set(img) != pts) throw std::domain_error("decoration does not respect tile symmetry");
    }
    for (const auto& p : pts) {
      bool inside = false;
      for (const auto& piece : proto.pieces) inside = inside || point_in_convex(p, piece) == 1;
      if (!inside) throw std::domain_error("decoration point outside the prototile interior");
    }
    for (std::size_t a = 0; a < pts.size(); ++a)
      for (std::size_t b = a + 1; b < pts.size(); ++b) intra_min = std::min(intra_min, std::abs((pts[a] - pts[b]).to_complex()));
    dec.points.push_back(pts);
    dec.marked.push_back(marked);
  }
  const double gap = 2.0 * rho_min - dec.D.real_d();
  dec.radius = std::min(intra_min, gap) / 2.0;
  dec.cluster_threshold = rho_min;
  return dec;
}

std::vector<Gaussian> decorate_points(const Decoration& dec, const std::vector<Tile>& packing) {
  std::vector<Gaussian> out;
  for (const auto& t : packing) {
    for (const auto& p : dec.points.at(t.type)) out.push_back(t.g.apply(p));
  }
  return out;
}

PointSetWindow decorate(const Decoration& dec, const std::vector<Tile>& packing) {
  auto pts = decorate_points(dec, packing);
  Box w = Box::square(0, 0, 0, 0);
  if (!pts.empty()) {
    w = Box::square(1e300, 1e300, -1e300, -1e300);
    for (const auto& p : pts) {
      w.lo[0] = std::min(w.lo[0], p.real_d());
      w.lo[1] = std::min(w.lo[1], p.imag_d());
      w.hi[0] = std::max(w.hi[0], p.real_d());
      w.hi[1] = std::max(w.hi[1], p.imag_d());
    }
  }
  PointSetWindow out(2, std::move(pts), w, dec.radius);
  out.provenance = GeneratorSpec::decorated("", 0, true);
  return out;
}

std::vector<Tile> canonical_packing(const SubstitutionRule& rule, std::vector<Tile> packing) {
  for (auto& t : packing) t = canonical_tile(rule, t);
  std::sort(packing.begin(), packing.end(), tile_order);
  return packing;
}

std::vector<Tile> undecorate(const SubstitutionRule& rule, const Decoration& dec, const PointSetWindow& p) {
  if (!p.is_exact()) throw std::invalid_argument("undecorate needs exact points");
  if (p.dim() != 2) throw std::invalid_argument("undecorate needs a planar point set");
  const std::size_t n = p.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b : p.within(p.points()[a], dec.cluster_threshold)) {
      std::size_t ra = find(a), rb = find(b);
      if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    }
  }
  std::vector<std::vector<Gaussian>> clusters;
  std::vector<std::size_t> slot(n, SIZE_MAX);
  for (std::size_t a = 0; a < n; ++a) {
    std::size_t r = find(a);
    if (slot[r] == SIZE_MAX) {
      slot[r] = clusters.size();
      clusters.emplace_back();
    }
    clusters[slot[r]].push_back(p.exact_points()[a]);
  }

  std::vector<Tile> out;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const auto q = sorted_set(clusters[c]);
    bool decoded = false;
    for (std::size_t j = 0; j < dec.points.size() && !decoded; ++j) {
      const auto& phi = dec.points[j];
      if (phi.size() != q.size()) continue;
      const Gaussian outer = dec.scale * Gaussian(static_cast<std::int64_t>(j + 1));
      for (const auto& ctr : q) {
        for (const auto& o : q) {
          if (o == ctr) continue;
          Gaussian u = (o - ctr) / outer;
          if (u.norm() != Gaussian(1)) continue;
          for (bool reflect : {false, true}) {
            ExactMotion g{ctr, u, reflect};
            std::vector<Gaussian> img;
            for (const auto& x : phi) img.push_back(g.apply(x));
            if (sorted_set(img) == q) {
              out.push_back(canonical_tile(rule, Tile{static_cast<int>(j), g}));
              decoded = true;
              break;
            }
          }
          if (decoded) break;
        }
        if (decoded) break;
      }
    }
    if (!decoded) {
      std::string msg = "cluster " + std::to_string(c) + " does not decode:";
      for (const auto& x : q) msg += " " + x.str();
      throw std::domain_error(msg);
    }
  }
  std::sort(out.begin(), out.end(), tile_order);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Tile> tiles_near(const SubstitutionRule& rule, int level, const Gaussian& offset, const Box& region) {
  if (level < 0) throw std::invalid_argument("level must be >= 0");
  double rmax = 0.0;
  for (const auto& p : rule.prototiles)
    for (const auto& v : p.outline) rmax = std::max(rmax, std::abs(v.to_complex()));
  const cplx m = rule.mult.to_complex();
  const cplx off = offset.to_complex();
  std::vector<cplx> mpow(level + 1, {1.0, 0.0});
  for (int k = 1; k <= level; ++k) mpow[k] = mpow[k - 1] * m;
  const double lam = std::abs(m);

  auto meets = [&](cplx c, double r) {
    double dx = std::max({region.lo[0] - c.real(), 0.0, c.real() - region.hi[0]});
    double dy = region.dim == 2 ? std::max({region.lo[1] - c.imag(), 0.0, c.imag() - region.hi[1]}) : 0.0;
    return dx * dx + dy * dy <= r * r;
  };

  std::vector<Tile> out;
  std::vector<std::pair<int, Tile>> stack = {{0, Tile{0, ExactMotion::identity()}}};
  while (!stack.empty()) {
    auto [n, t] = stack.back();
    stack.pop_back();
    const int rest = level - n;
    cplx c = mpow[rest] * t.g.shift.to_complex() + off;
    if (!meets(c, std::pow(lam, rest) * rmax * (1 + 1e-9) + 1e-9)) continue;
    if (rest == 0) {
      out.push_back({t.type, ExactMotion::translation(offset).compose(t.g)});
      continue;
    }
    ExactMotion big = conjugate_by_expansion(rule.mult, t.g);
    const auto& kids = rule.dissection[t.type];
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back({n + 1, Tile{it->type, big.compose(it->g)}});
  }
  return out;
}

Gaussian supertile_offset(const SubstitutionRule& rule, int level) {
  const auto poly = to_float(rule.prototiles[0].outline);
  double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
  for (const auto& v : poly) {
    x0 = std::min(x0, v.real());
    y0 = std::min(y0, v.imag());
    x1 = std::max(x1, v.real());
    y1 = std::max(y1, v.imag());
  }
  cplx best{0.0, 0.0};
  double bd = -1.0;
  const int steps = 128;
  for (int a = 0; a <= steps; ++a) {
    for (int b = 0; b <= steps; ++b) {
      cplx z{x0 + (x1 - x0) * a / steps, y0 + (y1 - y0) * b / steps};
      if (!point_in_polygon(z, poly)) continue;
      double d = boundary_distance(z, poly);
      if (d > bd) {
        bd = d;
        best = z;
      }
    }
  }
  cplx c = std::pow(rule.mult.to_complex(), level) * best;
  return Gaussian(-static_cast<std::int64_t>(std::llround(c.real())), -static_cast<std::int64_t>(std::llround(c.imag())));
}

PointSetWindow decorated_tiling(const std::string& name, int level, bool exact, const Box& window) {
  if (window.dim != 2) throw std::invalid_argument("decorated tilings are planar");
  SubstitutionRule rule = builtin_rule(name);
  Decoration dec = build_decoration(rule);
  Gaussian off = supertile_offset(rule, level);

  // the window must lie inside the supertile support
  std::vector<cplx> outline;
  const cplx ml = std::pow(rule.mult.to_complex(), level);
  for (const auto& v : rule.prototiles[0].outline) outline.push_back(ml * v.to_complex() + off.to_complex());
  const int samples = 64;
  for (int s = 0; s <= samples; ++s) {
    double t = static_cast<double>(s) / samples;
    double x = window.lo[0] + t * (window.hi[0] - window.lo[0]);
    double y = window.lo[1] + t * (window.hi[1] - window.lo[1]);
    for (cplx z : {cplx{x, window.lo[1]}, cplx{x, window.hi[1]}, cplx{window.lo[0], y}, cplx{window.hi[0], y}}) {
      if (!point_in_polygon(z, outline)) throw std::domain_error("window exceeds the level-" + std::to_string(level) + " supertile");
    }
  }

  auto tiles = tiles_near(rule, level, off, window);
  std::vector<Gaussian> pts;
  for (const auto& p : decorate_points(dec, tiles)) {
    if (window.contains(p.to_complex()) && window.contains_exact(p)) pts.push_back(p);
  }
  if (exact) return PointSetWindow(2, std::move(pts), window, dec.radius);
  std::vector<cplx> fl;
  fl.reserve(pts.size());
  for (const auto& p : pts) fl.push_back(p.to_complex());
  return PointSetWindow(2, std::move(fl), window, dec.radius);
}

}  // namespace delone

// Acceptance runner: one line per criterion, exit status 1 if any fails.
//
//   acceptance            run all criteria
//   acceptance 3 5        run only the listed ones

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>

#include "delone/decorate.hpp"
#include "delone/ergodic.hpp"
#include "delone/io.hpp"
#include "delone/metrics.hpp"
#include "delone/repet.hpp"
#include "delone/subst.hpp"
#include "support.hpp"

using namespace delone;
using testing::Frac;
using testing::Rng;

namespace {

/// Counts checks and keeps the first few failures.
struct Tally {
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    if (failures++ < 4) notes.push_back(what);
  }
};

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome finish(const Tally& t, const std::string& summary) {
  std::string d = summary + "; " + std::to_string(t.checks) + " checks";
  if (t.failures > 0) {
    d += ", " + std::to_string(t.failures) + " failed:";
    for (const auto& n : t.notes) d += " [" + n + "]";
  }
  return {t.failures == 0, d};
}

std::string fmt(double v, int prec = 4) {
  std::ostringstream s;
  s.precision(prec);
  s << v;
  return s.str();
}

Frac fr(const Gaussian& g) { return testing::frac_re(g); }

/// Distance from q to the nearest entry of a sorted list, with that entry.
std::pair<Frac, Frac> nearest(const std::vector<Frac>& sorted, Frac q) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), q);
  Frac best(1 << 30, 1), at;
  if (it != sorted.end()) best = *it - q, at = *it;
  if (it != sorted.begin()) {
    Frac d = q - *std::prev(it);
    if (d < best) best = d, at = *std::prev(it);
  }
  return {best, at};
}

// ---- 1 -----------------------------------------------------------------------------

Outcome two_adic_suite() {
  Tally t;
  const auto p = realize(GeneratorSpec::two_adic(), Box::interval(-4096, 4096));
  const auto& x = p.exact_points();
  t.require(x.size() == 8192, "8192 points in the window");
  std::vector<Frac> v;
  for (std::size_t i = 0; i < x.size(); ++i) {
    v.push_back(fr(x[i]));
    t.require(v.back() == testing::two_adic_oracle(static_cast<std::int64_t>(i) - 4096), "p_k matches the oracle");
  }

  // (a) and (c)
  const Frac half(1, 2);
  std::set<std::pair<long double, long double>> distinct;
  std::size_t half_gaps = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    Frac gap = v[i] - v[i - 1];
    t.require(!(gap < half), "gap >= 1/2");
    if (gap == half) {
      ++half_gaps;
      t.require(v[i] == Frac(0, 1) && v[i - 1] == Frac(-1, 2), "gap 1/2 only at (p_-1, p_0)");
    }
    distinct.insert({static_cast<long double>(gap.num), static_cast<long double>(gap.den)});
  }
  t.require(half_gaps == 1, "exactly one gap of 1/2");

  // (d)
  auto spectrum = neighbor_gap_spectrum_exact(p);
  std::set<std::pair<std::int64_t, std::int64_t>> lib;
  for (const auto& g : spectrum) lib.insert({static_cast<std::int64_t>(fr(g).num), static_cast<std::int64_t>(fr(g).den)});
  t.require(distinct.size() >= 8, ">= 8 distinct neighbor gaps");
  t.require(lib.size() == distinct.size(), "library gap spectrum agrees");

  // (b) both inclusions; equality in the estimate only on pairs with p_0
  std::size_t boundary = 0, strict_checked = 0;
  const Frac lo(-4096 + 1, 1), hi(4096 - 1, 1);
  for (int n = 0; n <= 8; ++n) {
    const Frac eps(1, std::int64_t{2} << n);
    const Gaussian eps_g = Gaussian::rational(1, std::int64_t{2} << n);
    for (std::int64_t m : {-5, -3, -1, 1, 3, 5}) {
      const std::int64_t s = m * (std::int64_t{1} << n);
      // P + s inside (P)_eps
      for (std::size_t i = 0; i < v.size(); ++i) {
        const Frac q = v[i] + Frac(s, 1);
        if (q < lo || hi < q) continue;
        auto [d, at] = nearest(v, q);
        const bool strict = d < eps;
        t.require(!(eps < d), "P + m 2^n within the closed 2^-(n+1) thickening");
        t.require(strict == thickening_contains_exact(p, x[i] + Gaussian(s), eps_g), "library thickening agrees");
        if (!strict) {
          ++boundary;
          t.require((v[i] == Frac(0, 1) || at == Frac(0, 1)) && d == eps, "strict inclusion fails only next to p_0");
        }
        ++strict_checked;
      }
      // P inside (P + s)_eps
      for (std::size_t j = 0; j < v.size(); ++j) {
        const Frac q = v[j] - Frac(s, 1);
        if (q < lo || hi < q) continue;
        auto [d, at] = nearest(v, q);
        t.require(!(eps < d), "P within the closed thickening of P + m 2^n");
        if (!(d < eps)) {
          ++boundary;
          t.require((v[j] == Frac(0, 1) || at == Frac(0, 1)) && d == eps, "converse strict inclusion fails only next to p_0");
        }
        ++strict_checked;
      }
    }
  }

  // (e) exact periods of the punctured set
  const auto p0 = realize(GeneratorSpec::two_adic_punctured(), Box::interval(-4096, 4096));
  std::vector<Frac> v0;
  for (const auto& z : p0.exact_points()) v0.push_back(fr(z));
  t.require(v0.size() == v.size() - 1, "P_0 drops exactly p_0");
  std::size_t periods = 0;
  for (std::int64_t k = -4096; k < 4096; ++k) {
    if (k == 0) continue;
    const int tk = testing::trailing_twos(k);
    for (int n = tk + 1; n <= tk + 3; ++n) {
      for (std::int64_t m = -3; m <= 3; ++m) {
        if (m == 0) continue;
        const std::int64_t j = k + m * (std::int64_t{1} << n);
        if (j < -4096 || j >= 4096) continue;
        const Gaussian moved = two_adic_point(k) + Gaussian(m * (std::int64_t{1} << n));
        t.require(moved == two_adic_point(j), "p_k + m 2^n = p_(k + m 2^n)");
        t.require(std::binary_search(v0.begin(), v0.end(), fr(moved)), "p_k + m 2^n lies in P_0");
        ++periods;
      }
    }
  }
  return finish(t, std::to_string(distinct.size()) + " distinct gaps, " + std::to_string(strict_checked) +
                       " inclusion tests, equality only on pairs with p_0 (" + std::to_string(boundary) + " cases), " +
                       std::to_string(periods) + " P_0 periods");
}

// ---- 2 -----------------------------------------------------------------------------

Outcome pinwheel_suite() {
  Tally t;
  auto pin = builtin_rule("pinwheel");
  for (int k = 0; k <= 4; ++k) {
    auto tree = supertile(pin, 0, k);
    auto leaves = tree.leaves();
    t.require(leaves.size() == static_cast<std::size_t>(std::pow(5, k)), "5^k leaves at k = " + std::to_string(k));
    std::vector<std::vector<Polygon>> parts;
    for (const auto& l : leaves) parts.push_back(tile_pieces(pin, l));
    t.require(support_equals(parts, scaled_pieces(pin, Tile{0, ExactMotion::identity()}, k)),
              "support equals the expanded prototile at k = " + std::to_string(k));
    t.require(interiors_disjoint(parts), "interiors disjoint at k = " + std::to_string(k));
  }
  auto m = substitution_matrix(pin);
  t.require(m == IntMatrix{{5}}, "matrix [[5]]");
  auto prim = is_primitive(m);
  t.require(prim.primitive && prim.power == 1, "primitive at power 1");
  auto w = dto_witness(pin, 2);
  t.require(w.verdict == DtoVerdict::CertifiedIrrational, "pinwheel certified irrational");
  t.require(w.order <= 2, "witness order <= 2");
  const bool rel = w.relative == Gaussian(3, 4, 5) || w.relative == Gaussian(3, -4, 5);
  t.require(rel, "relative rotation (3 +- 4i)/5");
  t.require(dto_witness(builtin_rule("chair"), 4).verdict == DtoVerdict::NoneFound, "chair none-found");
  return finish(t, "relative rotation " + fmt(w.relative.real_d()) + (w.relative.imag_d() < 0 ? "" : "+") +
                       fmt(w.relative.imag_d()) + "i at order " + std::to_string(w.order));
}

// ---- 3 -----------------------------------------------------------------------------

double lattice_need(cplx c, cplx big, double r) {
  double best = INFINITY;
  const double base = std::floor(big.real() - c.real());
  for (double k = base - 2; k <= base + 2; ++k) {
    if (k == 0) continue;
    best = std::min(best, std::abs(c + cplx(k, 0) - big) + r);
  }
  return best;
}

std::string ratios(const RepetitivityCurve& c) {
  std::string s;
  for (const auto& f : c.fits) s += (s.empty() ? "" : ", ") + fmt(f.eps) + ":" + fmt(f.max_ratio, 3);
  return s;
}

Outcome repetitivity_suite() {
  Tally t;
  auto two = realize(GeneratorSpec::two_adic(), Box::interval(-2000, 2000));
  RepetitivityOptions opt;
  opt.seed = 31;
  opt.r_centers = 24;
  opt.big_centers = 24;
  opt.sample_region = Box::interval(-500, 500);
  auto curve = repetitivity_curve(two, {2, 4, 8, 16, 32, 64}, {0.1, 0.05, 0.025}, opt);
  t.require(!curve.failed, "two-adic curve has no failed search");
  for (const auto& f : curve.fits) {
    t.require(f.linear, "two-adic linear at eps " + fmt(f.eps));
    t.require(f.max_ratio <= 2.5, "two-adic doubling ratio " + fmt(f.max_ratio) + " at eps " + fmt(f.eps));
  }

  auto pin = decorated_tiling("pinwheel", 10, false, Box::centered(2, 800));
  RepetitivityOptions w;
  w.wiggle = true;
  w.seed = 1;
  w.r_centers = 64;
  w.big_centers = 32;
  w.sample_region = Box::centered(2, 50);
  auto wc = repetitivity_curve(pin, {2, 4, 8, 16}, {0.2, 0.1}, w);
  t.require(!wc.failed, "pinwheel wiggle curve has no failed search");
  for (const auto& f : wc.fits) t.require(f.linear, "pinwheel wiggle linear at eps " + fmt(f.eps));

  auto exact = decorated_tiling("pinwheel", 8, true, Box::centered(2, 60));
  RepetitivityOptions plain;
  plain.seed = 2;
  plain.r_centers = 16;
  plain.big_centers = 16;
  plain.sample_region = Box::centered(2, 20);
  auto fail = repetitivity_radius(exact, 2.0, 0.0, plain);
  t.require(fail.failed, "plain eps = 0 search on the pinwheel fails");

  auto z = realize(GeneratorSpec::lattice(1), Box::interval(-300, 300));
  Rng rng(32);
  std::size_t lattice_cases = 0;
  for (double r : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    for (double eps : {0.3, 0.1, 0.01}) {
      RepetitivityOptions o;
      for (int k = 0; k < 16; ++k) {
        o.r_center_list.push_back({rng.uniform(-100, 100), 0});
        o.big_center_list.push_back({rng.uniform(-100, 100), 0});
      }
      double expect = 0.0;
      for (auto c : o.r_center_list)
        for (auto b : o.big_center_list) expect = std::max(expect, lattice_need(c, b, r));
      auto est = repetitivity_radius(z, r, eps, o);
      t.require(!est.failed && std::abs(est.r_hat - expect) <= 1e-12 * expect, "lattice R equals the oracle");
      t.require(est.r_hat <= r + 1, "lattice R <= r + 1");
      ++lattice_cases;
    }
  }
  return finish(t, "two-adic ratios {" + ratios(curve) + "}, pinwheel wiggle ratios {" + ratios(wc) +
                       "}, plain pinwheel search " + (fail.failed ? "fails" : "succeeds") + ", " +
                       std::to_string(lattice_cases) + " lattice cases");
}

// ---- 4 -----------------------------------------------------------------------------

Outcome minimality_suite() {
  Tally t;
  auto two = realize(GeneratorSpec::two_adic(), Box::interval(-700, 700));
  std::string gaps;
  for (int n = 0; n <= 5; ++n) {
    const double eps = std::ldexp(1.0, -(n + 1)) * (1 + 1.0 / 1024);
    const std::int64_t g = std::max<std::int64_t>(16, std::int64_t{8} << n);
    const double edge = static_cast<double>(g - (std::int64_t{2} << n));
    auto ps = period_set(two, eps, PeriodMode::LR, std::nullopt, integer_grid(1, -g, g), Box::interval(-edge, edge));
    const double bound = std::ldexp(1.0, n + 1) + 1;
    t.require(ps.max_gap <= bound, "two-adic max_gap " + fmt(ps.max_gap) + " at n = " + std::to_string(n));
    gaps += (gaps.empty() ? "" : ",") + fmt(ps.max_gap);
  }

  auto bohr = realize(GeneratorSpec::bohr_golden(), Box::interval(-1000, 1000));
  std::string bgaps;
  for (double eps : {0.1, 0.05}) {
    double prev = kInfinity;
    for (std::int64_t l : {100, 200, 400, 800}) {
      auto ps = period_set(bohr, eps, PeriodMode::LR, std::nullopt, integer_grid(1, -l, l),
                           Box::interval(static_cast<double>(-l), static_cast<double>(l)));
      t.require(std::isfinite(ps.max_gap), "bohr max_gap finite");
      t.require(ps.max_gap <= prev, "bohr max_gap nonincreasing at eps " + fmt(eps) + ", window " + std::to_string(l));
      prev = ps.max_gap;
      bgaps += (l == 100 ? (bgaps.empty() ? "eps " : "; eps ") + fmt(eps) + ": " : ",") + fmt(ps.max_gap);
    }
  }

  // f(n) read off the realized points n + f(n)
  std::map<std::int64_t, double> f;
  for (const auto& z : bohr.points()) {
    const auto n = static_cast<std::int64_t>(std::llround(z.real()));
    f[n] = z.real() - static_cast<double>(n);
  }
  double worst = 0.0;
  for (const auto& [n, fn] : f) {
    auto it = f.find(n + 13);
    if (it != f.end()) worst = std::max(worst, std::abs(it->second - fn));
  }
  t.require(f.size() >= 1990, "one bohr point per integer");
  t.require(worst <= 0.08, "|f(n + 13) - f(n)| = " + fmt(worst));
  return finish(t, "two-adic gaps n=0..5 {" + gaps + "}, bohr gaps {" + bgaps + "}, sup |f(n+13)-f(n)| = " + fmt(worst));
}

// ---- 5 -----------------------------------------------------------------------------

Frac fmin(Frac a, Frac b) { return a < b ? a : b; }
Frac fmax(Frac a, Frac b) { return a < b ? b : a; }

Frac overlap(const SquarishBox& a, const SquarishBox& b) {
  Frac v(1, 1);
  for (int k = 0; k < a.dim; ++k) {
    Frac lo = fmax(fr(a.lo[k]), fr(b.lo[k])), hi = fmin(fr(a.hi[k]), fr(b.hi[k]));
    if (!(lo < hi)) return Frac(0, 1);
    v = v * (hi - lo);
  }
  return v;
}

Frac volume(const SquarishBox& a) {
  Frac v(1, 1);
  for (int k = 0; k < a.dim; ++k) v = v * (fr(a.hi[k]) - fr(a.lo[k]));
  return v;
}

bool in_class(const SquarishBox& b, Frac u) {
  for (int k = 0; k < b.dim; ++k) {
    Frac s = fr(b.hi[k]) - fr(b.lo[k]);
    if (s < u || Frac(2, 1) * u < s) return false;
  }
  return true;
}

Outcome ergodic_suite() {
  Tally t;
  Rng rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = trial % 2 == 0 ? 2 : 1;
    Gaussian w = Gaussian::rational(rng.integer(4, 60), rng.integer(1, 6));
    Gaussian u = w * Gaussian::rational(rng.integer(1, 16), 16);
    auto side = [&] { return w + w * Gaussian::rational(rng.integer(0, 24), 24); };
    Gaussian x0 = rng.rational(30, 5), y0 = rng.rational(30, 5);
    auto b = dim == 1 ? SquarishBox::interval(x0, x0 + side()) : SquarishBox::square(x0, y0, x0 + side(), y0 + side());
    auto parts = squarish_decompose(b, u, w);
    Frac sum(0, 1);
    bool disjoint = true, classes = true;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      classes = classes && in_class(parts[i], fr(u));
      sum = sum + volume(parts[i]);
      for (std::size_t j = i + 1; j < parts.size(); ++j) disjoint = disjoint && overlap(parts[i], parts[j]) == Frac(0, 1);
    }
    t.require(classes, "pieces in class U");
    t.require(disjoint, "pieces disjoint");
    t.require(sum == volume(b), "volumes add up");
  }

  const auto count = WeightFunctionSpec::smoothed_count(0.5, 0.5);
  auto pin = decorated_tiling("pinwheel", 9, false, Box::centered(2, 300));
  struct Case {
    std::string name;
    PointSetWindow p;
    std::vector<double> us;
  };
  std::vector<Case> cases = {
      {"lattice", realize(GeneratorSpec::lattice(1), Box::interval(-1500, 1500)), {4, 8, 16, 32, 64, 128}},
      {"two-adic", realize(GeneratorSpec::two_adic(), Box::interval(-1500, 1500)), {4, 8, 16, 32, 64, 128}},
      {"bohr", realize(GeneratorSpec::bohr_golden(), Box::interval(-1500, 1500)), {4, 8, 16, 32, 64, 128}},
      {"pinwheel", pin, {2, 4, 8, 16, 32, 64}},
  };
  std::string gaps;
  for (const auto& c : cases) {
    auto curve = density_curve(count, c.p, c.us, 48, 52);
    for (std::size_t k = 1; k < curve.rows.size(); ++k)
      t.require(curve.rows[k].upper <= curve.rows[k - 1].upper + 0.05, c.name + " f+(2U) <= f+(U) + 0.05");
    const double g = curve.rows.back().upper - curve.rows.back().lower;
    t.require(g <= 0.1, c.name + " gap " + fmt(g));
    gaps += c.name + " " + fmt(g, 3) + ", ";
  }
  auto defect = realize(GeneratorSpec::half_line_defect(), Box::interval(-1500, 1500));
  auto dc = density_curve(count, defect, {4, 8, 16, 32, 64, 128}, 48, 52);
  const double dg = dc.rows.back().upper - dc.rows.back().lower;
  t.require(dg >= 0.2, "defect gap " + fmt(dg));

  const double j64 = birkhoff_average(count, pin, 64);
  const double j128 = birkhoff_average(count, pin, 128);
  t.require(std::abs(j64 - j128) <= 0.05 * std::abs(j128), "J_64 vs J_128");
  double cross = 0.0;
  for (int k = 0; k < 5; ++k) {
    cplx x(rng.uniform(-40, 40), rng.uniform(-40, 40));
    cross = std::max(cross, std::abs(birkhoff_average(count, pin.translated(x), 128) - j128));
  }
  t.require(cross <= 0.05 * std::abs(j128), "cross-hull J_128");
  const double turned = birkhoff_average(count, pin, 128, {0.3, 0.9, 1.5, 2.2, 2.8});
  t.require(std::abs(turned - j128) <= 0.05, "rotation-averaged J_128");
  return finish(t, "gaps at largest U: " + gaps + "defect " + fmt(dg, 3) + "; J_64 " + fmt(j64, 6) + ", J_128 " +
                       fmt(j128, 6) + ", shift spread " + fmt(cross, 3) + ", rotated " + fmt(turned, 6));
}

// ---- 6 -----------------------------------------------------------------------------

std::vector<Tile> moved(const std::vector<Tile>& c, const ExactMotion& g) {
  std::vector<Tile> out;
  for (const auto& tile : c) out.push_back({tile.type, g.compose(tile.g)});
  return out;
}

std::vector<Tile> random_subpatch(Rng& rng, const std::vector<Tile>& leaves) {
  std::vector<Tile> out;
  for (const auto& tile : leaves)
    if (rng.integer(0, 2) != 0) out.push_back(tile);
  if (out.empty()) out.push_back(leaves.front());
  return out;
}

std::vector<Gaussian> sorted(std::vector<Gaussian> v) {
  std::sort(v.begin(), v.end(), lex_less);
  return v;
}

Outcome decoration_suite() {
  Tally t;
  auto rule = builtin_rule("pinwheel");
  auto dec = build_decoration(rule);
  auto leaves = supertile(rule, 0, 3).leaves();
  Rng rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    auto c = moved(random_subpatch(rng, leaves), rng.motion(5, 3, 3));
    t.require(undecorate(rule, dec, decorate(dec, c)) == canonical_packing(rule, c), "round trip");
  }
  for (int trial = 0; trial < 10; ++trial) {
    ExactMotion g = rng.motion(6, 4, 3);
    auto c = random_subpatch(rng, leaves);
    std::vector<Gaussian> rhs;
    for (const auto& z : decorate_points(dec, c)) rhs.push_back(g.apply(z));
    t.require(sorted(decorate_points(dec, moved(c, g))) == sorted(rhs), "equivariance");
  }
  std::vector<std::vector<Tile>> packings;
  std::vector<std::vector<Gaussian>> images;
  auto small = supertile(rule, 0, 2).leaves();
  while (packings.size() < 20) {
    auto c = canonical_packing(rule, moved(random_subpatch(rng, small), rng.motion(1, 1, 1)));
    if (std::find(packings.begin(), packings.end(), c) != packings.end()) continue;
    packings.push_back(c);
    images.push_back(sorted(decorate_points(dec, c)));
  }
  for (std::size_t a = 0; a < packings.size(); ++a)
    for (std::size_t b = a + 1; b < packings.size(); ++b) t.require(images[a] != images[b], "injectivity");
  return finish(t, "10 round trips, 10 motions, 20 distinct packings");
}

// ---- 7 -----------------------------------------------------------------------------

Outcome metric_suite() {
  Tally t;
  Rng rng(71);
  const std::vector<GeneratorSpec> kinds = {GeneratorSpec::lattice(1), GeneratorSpec::two_adic(),
                                            GeneratorSpec::two_adic_punctured(), GeneratorSpec::bohr_golden(),
                                            GeneratorSpec::half_line_defect()};
  std::vector<PointSetWindow> base;
  for (const auto& k : kinds) base.push_back(realize(k, Box::interval(-300, 300)));
  std::vector<PointSetWindow> pool;
  for (int k = 0; k < 40; ++k) pool.push_back(base[k % base.size()].translated({rng.uniform(-1.5, 1.5), 0}));
  const std::size_t n = pool.size();
  std::vector<std::vector<LrResult>> d(n, std::vector<LrResult>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (a != b) d[a][b] = local_rubber_distance(pool[a], pool[b]);
  std::size_t limited = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      t.require(d[a][b].value == d[b][a].value, "d_LR symmetric");
      limited += d[a][b].window_limited;
    }
  std::size_t triples = 0, skipped = 0;
  while (triples < 1000 && skipped < 1000) {
    std::size_t a = rng.integer(0, n - 1), b = rng.integer(0, n - 1), c = rng.integer(0, n - 1);
    if (a == b || b == c || a == c) continue;
    if (d[a][b].window_limited || d[b][c].window_limited || d[a][c].window_limited) {
      ++skipped;
      continue;
    }
    ++triples;
    t.require(d[a][c].value <= d[a][b].value + d[b][c].value + 2e-9, "triangle inequality");
  }

  auto two = realize(GeneratorSpec::two_adic(), Box::interval(-700, 700));
  std::vector<cplx> centers;
  for (int k = 0; k < 600; ++k) centers.emplace_back(rng.uniform(-600, 600), 0);
  const double eps = 0.2;
  Region tmpl = Region::of_box(Box::interval(-4, 4));
  auto classes = classify_patterns(two, tmpl, eps, centers);
  std::vector<const SimilarityClass*> multi;
  for (const auto& c : classes)
    if (c.members.size() >= 2) multi.push_back(&c);
  std::size_t pairs = 0;
  if (!multi.empty()) {
    for (; pairs < 500; ++pairs) {
      const auto& cl = *multi[rng.integer(0, multi.size() - 1)];
      std::size_t i = cl.members[rng.integer(0, cl.members.size() - 1)];
      std::size_t j = cl.members[rng.integer(0, cl.members.size() - 1)];
      t.require(pattern_deviation(pattern_content(two, centers[i], tmpl), pattern_content(two, centers[j], tmpl), tmpl) <=
                    eps,
                "same-type pair is eps-similar");
    }
  }
  t.require(pairs == 500, "500 same-type pairs sampled");

  auto chair = decorated_tiling("chair", 7, true, Box::centered(2, 28));
  double worst = 0.0;
  for (auto [a, b] : std::vector<std::pair<int, int>>{{5, 0}, {7, 0}, {9, 0}, {12, 0}, {0, 5}, {0, 9}, {5, 5}, {7, -3}, {-6, 9}, {-11, -2}}) {
    Gaussian x(a, b, 64);
    auto shifted = chair.transformed(ExactMotion::translation(x));
    auto lm = local_matching_distance(chair, shifted);
    auto lr = local_rubber_distance(chair, shifted);
    t.require(lm.certified, "chair bracket certified");
    t.require(!lr.window_limited, "chair d_LR not window limited");
    const double off = std::abs(lr.value - lm.upper) - (lm.upper - lm.lower);
    worst = std::max(worst, off);
    t.require(off <= 1e-8, "d_LR within the d_LM bracket");
  }
  return finish(t, std::to_string(triples) + " triples (" + std::to_string(skipped) + " window-limited skipped), " +
                       std::to_string(limited) + " limited pairs, " + std::to_string(classes.size()) + " classes, 500 pairs, chair excess " +
                       fmt(worst, 3));
}

// ---- 8 -----------------------------------------------------------------------------

int run_cli(const std::filesystem::path& dir, const std::string& env, const std::string& args) {
  const std::string cmd = "cd '" + dir.string() + "' && " + env + " '" DELONE_CLI_PATH "' " + args + " >stdout.txt 2>stderr.txt";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string hash_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return git_blob_hash(ss.str());
}

Outcome determinism_suite() {
  Tally t;
  const std::vector<std::string> commands = {
      "gen --set bohr --window 200 --out g.json",
      "gen --set pinwheel --level 5 --decorate --window 12 --out pw.json",
      "metric lr --a g.json --b pw0.json",
      "metric wiggle --a pw.json --b pw.json --center 0,0 --radius 6 --step 0.01",
      "subst --rule pinwheel --level 3 --out t.json",
      "subst --rule pinwheel --check --max-order 2",
      "decorate --rule pinwheel --tiles t.json --out d.json",
      "repet period --set twoadic --window 400 --eps 0.3 --grid-lo -32 --grid-hi 32 --out per.json",
      "repet radius --set bohr --window 800 --sample 200 --r 4 --eps 0.1 --out rad.json",
      "repet curve --set twoadic --window 800 --sample 200 --r 2,4,8 --eps 0.1,0.05 --out curve.csv",
      "ergodic --set bohr --window 800 --U 4,8,16 --samples 24 --birkhoff 64 --out dens.csv",
      "ergodic --set pinwheel --level 6 --window 30 --U 2,4 --samples 8 --out pdens.csv",
      "render --tiles t.json --rule pinwheel --out t.svg",
  };
  const auto root = std::filesystem::temp_directory_path() / ("delone_acceptance_" + std::to_string(::getpid()));
  std::size_t compared = 0;
  for (int round = 0; round < 2; ++round) {
    const auto dir = root / std::to_string(round);
    std::filesystem::create_directories(dir);
    // the second round changes the thread count; results must not depend on it
    const std::string env = round == 0 ? "DELONE_THREADS=4" : "DELONE_THREADS=1";
    if (run_cli(dir, env, "gen --set bohr --window 200 --out pw0.json") != 0) t.require(false, "setup");
    for (std::size_t k = 0; k < commands.size(); ++k) {
      const std::string rep = "rep" + std::to_string(k) + ".json";
      t.require(run_cli(dir, env, "--seed 97 --report " + rep + " " + commands[k]) == 0, "exit 0: " + commands[k]);
      std::filesystem::copy_file(dir / "stdout.txt", dir / ("out" + std::to_string(k) + ".txt"));
    }
  }
  for (std::size_t k = 0; k < commands.size(); ++k) {
    for (const auto& name : {"rep" + std::to_string(k) + ".json", "out" + std::to_string(k) + ".txt"}) {
      t.require(hash_file(root / "0" / name) == hash_file(root / "1" / name), "same bytes: " + commands[k]);
      ++compared;
    }
  }
  // a different seed changes a seeded report
  const auto dir = root / "0";
  run_cli(dir, "", "--seed 98 --report other.json " + commands[8]);
  t.require(hash_file(dir / "other.json") != hash_file(dir / "rep8.json"), "seed reaches the report");
  std::filesystem::remove_all(root);
  return finish(t, std::to_string(commands.size()) + " commands, " + std::to_string(compared) +
                       " report and stdout hashes compared across runs and thread counts");
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"two-adic exact suite", two_adic_suite},
      {"pinwheel substitution suite", pinwheel_suite},
      {"repetitivity suite", repetitivity_suite},
      {"minimality gauges", minimality_suite},
      {"ergodic suite", ergodic_suite},
      {"decoration suite", decoration_suite},
      {"metric suite", metric_suite},
      {"determinism", determinism_suite},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k + 1);
    if (!only.empty() && !only.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %d %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", id, criteria[k].first.c_str(), secs,
                o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}

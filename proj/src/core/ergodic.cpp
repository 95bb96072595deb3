#include "delone/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "delone/parallel.hpp"

namespace delone {

// ---- boxes ------------------------------------------------------------------

Gaussian SquarishBox::volume() const {
  Gaussian v = side(0);
  if (dim == 2) v = v * side(1);
  return v;
}

bool SquarishBox::in_class(const Gaussian& u) const {
  for (int a = 0; a < dim; ++a) {
    Gaussian l = side(a);
    if (real_less(l, u) || real_less(Gaussian(2) * u, l)) return false;
  }
  return true;
}

Box SquarishBox::to_box() const {
  if (dim == 1) return Box::interval(lo[0].real_d(), hi[0].real_d());
  return Box::square(lo[0].real_d(), lo[1].real_d(), hi[0].real_d(), hi[1].real_d());
}

std::vector<SquarishBox> squarish_decompose(const SquarishBox& b, const Gaussian& u, const Gaussian& w) {
  if (b.dim != 1 && b.dim != 2) throw std::invalid_argument("box dimension must be 1 or 2");
  if (!real_less(Gaussian(0), u)) throw std::invalid_argument("U must be positive");
  if (real_less(w, u)) throw std::invalid_argument("U > W");
  if (!b.in_class(w)) throw std::invalid_argument("box sides must lie in [W, 2W]");
  std::array<std::vector<Gaussian>, 2> cuts;
  for (int a = 0; a < b.dim; ++a) {
    const Gaussian l = b.side(a);
    const std::int64_t n = (l / (Gaussian(2) * u)).ceil();
    const Gaussian step = l / Gaussian(n);
    for (std::int64_t k = 0; k <= n; ++k) cuts[a].push_back(k == n ? b.hi[a] : b.lo[a] + Gaussian(k) * step);
  }
  std::vector<SquarishBox> out;
  if (b.dim == 1) {
    for (std::size_t i = 0; i + 1 < cuts[0].size(); ++i) out.push_back(SquarishBox::interval(cuts[0][i], cuts[0][i + 1]));
    return out;
  }
  for (std::size_t i = 0; i + 1 < cuts[0].size(); ++i)
    for (std::size_t j = 0; j + 1 < cuts[1].size(); ++j)
      out.push_back(SquarishBox::square(cuts[0][i], cuts[1][j], cuts[0][i + 1], cuts[1][j + 1]));
  return out;
}

double van_hove_boundary_volume(const Box& b, double s) {
  if (s < 0) throw std::invalid_argument("s must be nonnegative");
  double outer = 1.0, inner = 1.0;
  for (int a = 0; a < b.dim; ++a) {
    double l = b.hi[a] - b.lo[a];
    outer *= l + 2 * s;
    inner *= std::max(l - 2 * s, 0.0);
  }
  return outer - inner;
}

Gaussian van_hove_boundary_volume(const SquarishBox& b, const Gaussian& s) {
  if (real_less(s, Gaussian(0))) throw std::invalid_argument("s must be nonnegative");
  Gaussian outer(1), inner(1);
  for (int a = 0; a < b.dim; ++a) {
    Gaussian l = b.side(a);
    outer = outer * (l + Gaussian(2) * s);
    Gaussian in = l - Gaussian(2) * s;
    inner = inner * (real_less(in, Gaussian(0)) ? Gaussian(0) : in);
  }
  return outer - inner;
}

// ---- test functions ---------------------------------------------------------

double WeightFunctionSpec::profile(double s) const {
  if (kind == Kind::Constant) return 0.0;
  if (s <= window) return 1.0;
  if (s >= window + bump) return 0.0;
  double t = (s - window) / bump;
  return 1.0 - t * t * (3.0 - 2.0 * t);
}

double WeightFunctionSpec::mass(int dim) const {
  if (dim == 1) return 2 * window + bump;
  const double pi = std::numbers::pi;
  return pi * window * window + pi * window * bump + 0.3 * pi * bump * bump;
}

double WeightFunctionSpec::bound(int dim, double radius) const {
  if (kind == Kind::Constant) return std::abs(constant);
  const double s = support();
  double count = dim == 1 ? std::floor(s / radius) + 1 : (s + radius) * (s + radius) / (radius * radius);
  return count / mass(dim);
}

double WeightFunctionSpec::lipschitz(int dim, double radius) const {
  if (kind == Kind::Constant) return 0.0;
  return bound(dim, radius) * 1.5 / bump;
}

double evaluate(const WeightFunctionSpec& f, const PointSetWindow& p, cplx x) {
  if (f.kind == WeightFunctionSpec::Kind::Constant) return f.constant;
  double sum = 0.0;
  for (std::size_t i : p.within(x, f.support())) sum += f.profile(std::abs(p.points()[i] - x));
  return sum / f.mass(p.dim());
}

// ---- weights ----------------------------------------------------------------

namespace {

void check_spec(const WeightFunctionSpec& f) {
  if (f.kind == WeightFunctionSpec::Kind::Constant) return;
  if (!(f.window >= 0) || !(f.bump > 0)) throw std::invalid_argument("smoothed count needs window >= 0 and bump > 0");
}

/// Weight of m(P) over b, where m is a motion of the plane (or line).
Weight weight_mapped(const WeightFunctionSpec& f, const PointSetWindow& p, const Box& b, double h, const FloatMotion& m) {
  check_spec(f);
  if (b.dim != p.dim()) throw std::invalid_argument("box and point set dimensions differ");
  for (int a = 0; a < b.dim; ++a)
    if (!(b.hi[a] > b.lo[a])) throw std::invalid_argument("empty box");
  Weight out;
  if (f.kind == WeightFunctionSpec::Kind::Constant) {
    out.value = f.constant * b.volume();
    return out;
  }
  if (h <= 0) h = f.bump / 8;
  const double s = f.support();
  const int d = b.dim;
  const FloatMotion back = m.inverse();

  // the known region must hold b grown by the support
  const Box grown = b.expanded(s);
  std::vector<cplx> corners = {{grown.lo[0], grown.lo[1]}, {grown.hi[0], grown.hi[1]}};
  if (d == 2) {
    corners.push_back({grown.lo[0], grown.hi[1]});
    corners.push_back({grown.hi[0], grown.lo[1]});
  }
  for (const auto& c : corners) {
    if (!p.covers_ball(back.apply(c), 0.0)) throw std::domain_error("window does not cover the box plus the test-function support");
  }

  std::array<int, 2> n{1, 1};
  std::array<double, 2> cell{1.0, 1.0};
  for (int a = 0; a < d; ++a) {
    double l = b.hi[a] - b.lo[a];
    n[a] = std::max(1, static_cast<int>(std::ceil(l / h)));
    cell[a] = l / n[a];
  }
  const double cell_vol = d == 2 ? cell[0] * cell[1] : cell[0];
  const double mass = f.mass(d);

  const double reach = std::hypot(grown.hi[0] - grown.lo[0], d == 2 ? grown.hi[1] - grown.lo[1] : 0.0) / 2;
  const auto near = p.within(back.apply(b.center()), reach);
  std::vector<double> contrib(near.size(), 0.0);
  std::vector<char> partial(near.size(), 0);
  parallel_for((near.size() + 1023) / 1024, [&](std::size_t chunk) {
    const std::size_t end = std::min(near.size(), (chunk + 1) * 1024);
    for (std::size_t k = chunk * 1024; k < end; ++k) {
      const cplx z = m.apply(p.points()[near[k]]);
      const double zc[2] = {z.real(), z.imag()};
      bool inner = true;
      double out2 = 0.0;
      for (int a = 0; a < d; ++a) {
        if (zc[a] - s < b.lo[a] || zc[a] + s > b.hi[a]) inner = false;
        double o = std::max({b.lo[a] - zc[a], 0.0, zc[a] - b.hi[a]});
        out2 += o * o;
      }
      if (inner) {
        contrib[k] = 1.0;
        continue;
      }
      if (out2 >= s * s) continue;
      partial[k] = 1;
      std::array<int, 2> k0{0, 0}, k1{0, 0};
      for (int a = 0; a < d; ++a) {
        k0[a] = std::max(0, static_cast<int>(std::floor((zc[a] - s - b.lo[a]) / cell[a])));
        k1[a] = std::min(n[a] - 1, static_cast<int>(std::floor((zc[a] + s - b.lo[a]) / cell[a])));
      }
      double sum = 0.0;
      for (int i = k0[0]; i <= k1[0]; ++i) {
        const double x = b.lo[0] + (i + 0.5) * cell[0];
        if (d == 1) {
          sum += f.profile(std::abs(zc[0] - x));
          continue;
        }
        for (int j = k0[1]; j <= k1[1]; ++j) {
          const double y = b.lo[1] + (j + 0.5) * cell[1];
          sum += f.profile(std::hypot(zc[0] - x, zc[1] - y));
        }
      }
      contrib[k] = sum * cell_vol / mass;
    }
  });
  out.value = chunked_sum(contrib.size(), [&](std::size_t k) { return contrib[k]; });
  std::size_t boundary = 0;
  for (char c : partial) boundary += c;
  const double disk = d == 2 ? 4 * s * s : 2 * s;
  out.error = static_cast<double>(boundary) * (1.5 / f.bump) * (h * std::sqrt(static_cast<double>(d)) / 2) * disk / mass;
  return out;
}

}  // namespace

Weight weight(const WeightFunctionSpec& f, const PointSetWindow& p, const Box& b, double h) {
  return weight_mapped(f, p, b, h, FloatMotion::identity());
}

Weight weight_rotated(const WeightFunctionSpec& f, const PointSetWindow& p, const Box& b, double theta, double h) {
  if (p.dim() != 2) throw std::invalid_argument("rotations need a planar point set");
  return weight_mapped(f, p, b, h, FloatMotion::rotation(-theta));
}

double weight_generic(const std::function<double(cplx)>& g, const Box& b, double h) {
  if (!(h > 0)) throw std::invalid_argument("h must be positive");
  std::array<std::size_t, 2> n{1, 1};
  std::array<double, 2> cell{1.0, 1.0};
  for (int a = 0; a < b.dim; ++a) {
    double l = b.hi[a] - b.lo[a];
    n[a] = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(l / h)));
    cell[a] = l / static_cast<double>(n[a]);
  }
  const double cell_vol = b.dim == 2 ? cell[0] * cell[1] : cell[0];
  return cell_vol * chunked_sum(n[0] * n[1], [&](std::size_t k) {
           std::size_t i = k / n[1], j = k % n[1];
           cplx x{b.lo[0] + (static_cast<double>(i) + 0.5) * cell[0],
                  b.dim == 2 ? b.lo[1] + (static_cast<double>(j) + 0.5) * cell[1] : 0.0};
           return g(x);
         });
}

// ---- densities --------------------------------------------------------------

DensityBounds density_bounds(const WeightFunctionSpec& f, const PointSetWindow& p, double u, std::size_t samples,
                             std::uint64_t seed, const std::optional<Box>& region, double h) {
  if (!(u > 0)) throw std::invalid_argument("U must be positive");
  if (samples == 0) throw std::invalid_argument("need at least one sample");
  Box r;
  if (region) {
    r = *region;
  } else {
    const auto& fr = p.frame();
    if (fr.shift != cplx{0.0, 0.0} || fr.unit != cplx{1.0, 0.0} || fr.reflect)
      throw std::invalid_argument("moved windows need an explicit sample region");
    r = p.window().expanded(-f.support() - 1e-9);
  }
  for (int a = 0; a < r.dim; ++a) {
    if (r.hi[a] - r.lo[a] < u) throw std::domain_error("no box of class U fits in the window");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  DensityBounds out;
  out.lower = kInfinity;
  out.upper = -kInfinity;
  for (std::size_t i = 0; i < samples; ++i) {
    Box b = r;
    for (int a = 0; a < r.dim; ++a) {
      double side = std::min(u * (1.0 + unit(rng)), r.hi[a] - r.lo[a]);
      double start = r.lo[a] + unit(rng) * (r.hi[a] - r.lo[a] - side);
      b.lo[a] = start;
      b.hi[a] = start + side;
    }
    double v = weight(f, p, b, h).value / b.volume();
    out.lower = std::min(out.lower, v);
    out.upper = std::max(out.upper, v);
  }
  out.samples = samples;
  return out;
}

DensityCurve density_curve(const WeightFunctionSpec& f, const PointSetWindow& p, const std::vector<double>& us,
                           std::size_t samples, std::uint64_t seed, const std::optional<Box>& region, double h) {
  DensityCurve out;
  for (double u : us) {
    auto b = density_bounds(f, p, u, samples, seed, region, h);
    out.rows.push_back({u, b.lower, b.upper, b.samples});
  }
  if (!out.rows.empty()) out.limit = (out.rows.back().lower + out.rows.back().upper) / 2;
  return out;
}

double birkhoff_average(const WeightFunctionSpec& f, const PointSetWindow& p, double n,
                        const std::vector<double>& angles, double h) {
  if (!(n > 0)) throw std::invalid_argument("n must be positive");
  const Box b = Box::centered(p.dim(), n);
  if (angles.empty()) return weight(f, p, b, h).value / b.volume();
  double sum = 0.0;
  for (double th : angles) sum += weight_rotated(f, p, b, th, h).value / b.volume();
  return sum / static_cast<double>(angles.size());
}

std::vector<double> perturbation_sweep(const WeightFunctionSpec& f, const PointSetWindow& p,
                                       const std::vector<double>& deltas, std::size_t trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double base = evaluate(f, p, {0.0, 0.0});
  std::vector<double> out;
  for (double delta : deltas) {
    const auto near = p.within({0.0, 0.0}, f.support() + delta);
    double worst = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      double sum = 0.0;
      for (std::size_t i : near) {
        double len = delta * unit(rng);
        double ang = p.dim() == 2 ? 2 * std::numbers::pi * unit(rng) : (unit(rng) < 0.5 ? 0.0 : std::numbers::pi);
        sum += f.profile(std::abs(p.points()[i] + std::polar(len, ang)));
      }
      double v = f.kind == WeightFunctionSpec::Kind::Constant ? f.constant : sum / f.mass(p.dim());
      worst = std::max(worst, std::abs(v - base));
    }
    out.push_back(worst);
  }
  return out;
}

}  // namespace delone

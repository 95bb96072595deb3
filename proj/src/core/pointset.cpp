#include "delone/pointset.hpp"

#include <charconv>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <numbers>
#include <stdexcept>

#include "delone/decorate.hpp"

namespace delone {

bool Box::contains(cplx p) const {
  if (p.real() < lo[0] || p.real() > hi[0]) return false;
  if (dim == 2 && (p.imag() < lo[1] || p.imag() > hi[1])) return false;
  return true;
}

bool Box::contains_exact(const Gaussian& p) const {
  Gaussian x = p.real();
  if (real_less(x, dyadic(lo[0])) || real_less(dyadic(hi[0]), x)) return false;
  if (dim == 2) {
    Gaussian y = p.imag();
    if (real_less(y, dyadic(lo[1])) || real_less(dyadic(hi[1]), y)) return false;
  }
  return true;
}

double Box::volume() const {
  double v = hi[0] - lo[0];
  if (dim == 2) v *= hi[1] - lo[1];
  return v;
}

cplx Box::center() const {
  return {(lo[0] + hi[0]) / 2, dim == 2 ? (lo[1] + hi[1]) / 2 : 0.0};
}

Box Box::expanded(double s) const {
  Box b = *this;
  for (int a = 0; a < dim; ++a) {
    b.lo[a] -= s;
    b.hi[a] += s;
  }
  return b;
}

GeneratorSpec GeneratorSpec::bohr_golden() {
  return bohr({{1.0 / 3.0, (std::sqrt(5.0) - 1.0) / 2.0, 0.0}});
}

std::string kind_name(GenKind k) {
  switch (k) {
    case GenKind::IntegerLattice: return "integer-lattice";
    case GenKind::TwoAdic: return "two-adic";
    case GenKind::TwoAdicPunctured: return "two-adic-punctured";
    case GenKind::Bohr: return "bohr";
    case GenKind::DecoratedTiling: return "decorated-tiling";
    case GenKind::HalfLineDefect: return "half-line-defect";
  }
  return "unknown";
}

GenKind kind_from_name(const std::string& s) {
  for (GenKind k : {GenKind::IntegerLattice, GenKind::TwoAdic, GenKind::TwoAdicPunctured, GenKind::Bohr,
                    GenKind::DecoratedTiling, GenKind::HalfLineDefect}) {
    if (kind_name(k) == s) return k;
  }
  throw std::invalid_argument("unknown generator kind: " + s);
}

double trig_eval(const std::vector<TrigTerm>& f, double x) {
  double s = 0.0;
  for (const auto& t : f) s += t.amplitude * std::cos(2.0 * std::numbers::pi * t.frequency * x + t.phase);
  return s;
}

Gaussian dyadic(double v) {
  if (!std::isfinite(v)) throw std::domain_error("non-finite coordinate");
  if (v == 0.0) return Gaussian(0);
  int e = 0;
  double m = std::frexp(v, &e);
  auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
  e -= 53;
  while (e < 0 && (mant % 2) == 0) {
    mant /= 2;
    ++e;
  }
  if (e >= 0) {
    if (e > 62) throw std::overflow_error("coordinate too large");
    __int128 n = static_cast<__int128>(mant) << e;
    if (n > INT64_MAX || n < INT64_MIN) throw std::overflow_error("coordinate too large");
    return Gaussian(static_cast<std::int64_t>(n));
  }
  if (-e > 62) throw std::overflow_error("coordinate has too many binary digits");
  return Gaussian::rational(mant, std::int64_t{1} << (-e));
}

Gaussian decimal(double v) {
  if (!std::isfinite(v)) throw std::domain_error("non-finite value");
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string text(buf, res.ptr);
  std::int64_t exp10 = 0;
  if (auto e = text.find('e'); e != std::string::npos) {
    exp10 = std::stoll(text.substr(e + 1));
    text.resize(e);
  }
  bool neg = !text.empty() && text[0] == '-';
  if (neg) text.erase(0, 1);
  if (auto dot = text.find('.'); dot != std::string::npos) {
    exp10 -= static_cast<std::int64_t>(text.size() - dot - 1);
    text.erase(dot, 1);
  }
  try {
    __int128 num = 0;
    for (char ch : text) {
      num = num * 10 + (ch - '0');
      if (num > INT64_MAX) throw std::overflow_error("digits");
    }
    __int128 den = 1;
    for (; exp10 > 0; --exp10) num *= 10;
    for (; exp10 < 0; ++exp10) den *= 10;
    if (num > INT64_MAX || den > INT64_MAX) throw std::overflow_error("digits");
    auto n = static_cast<std::int64_t>(neg ? -num : num);
    return Gaussian::rational(n, static_cast<std::int64_t>(den));
  } catch (const std::overflow_error&) {
    return dyadic(v);
  }
}

// ---- PointSetWindow ------------------------------------------------------

PointSetWindow::PointSetWindow(int dim, std::vector<cplx> pts, Box window, double radius)
    : dim_(dim), exact_(false), pts_(std::move(pts)), window_(window), radius_(radius) {
  finish();
}

PointSetWindow::PointSetWindow(int dim, std::vector<Gaussian> pts, Box window, double radius)
    : dim_(dim), exact_(true), ex_(std::move(pts)), window_(window), radius_(radius) {
  pts_.reserve(ex_.size());
  for (const auto& g : ex_) pts_.push_back(g.to_complex());
  finish();
}

void PointSetWindow::finish() {
  if (dim_ != 1 && dim_ != 2) throw std::invalid_argument("dimension must be 1 or 2");
  std::vector<std::size_t> order(pts_.size());
  std::iota(order.begin(), order.end(), 0);
  auto less = [&](std::size_t a, std::size_t b) {
    if (pts_[a].real() != pts_[b].real()) return pts_[a].real() < pts_[b].real();
    if (pts_[a].imag() != pts_[b].imag()) return pts_[a].imag() < pts_[b].imag();
    if (exact_) return lex_less(ex_[a], ex_[b]);
    return false;
  };
  std::stable_sort(order.begin(), order.end(), less);
  std::vector<cplx> p2(pts_.size());
  for (std::size_t k = 0; k < order.size(); ++k) p2[k] = pts_[order[k]];
  pts_.swap(p2);
  if (exact_) {
    std::vector<Gaussian> e2(ex_.size());
    for (std::size_t k = 0; k < order.size(); ++k) e2[k] = ex_[order[k]];
    ex_.swap(e2);
  }
  cell_start_.clear();
  cell_items_.clear();
  if (dim_ != 2 || pts_.empty()) return;

  double x0 = pts_.front().real(), x1 = pts_.back().real();
  double y0 = pts_[0].imag(), y1 = y0;
  for (const auto& p : pts_) {
    y0 = std::min(y0, p.imag());
    y1 = std::max(y1, p.imag());
  }
  double area = std::max((x1 - x0) * (y1 - y0), 1e-12);
  cell_ = std::max(std::sqrt(area / static_cast<double>(pts_.size())), 1e-9);
  gx0_ = x0;
  gy0_ = y0;
  nx_ = static_cast<int>((x1 - x0) / cell_) + 1;
  ny_ = static_cast<int>((y1 - y0) / cell_) + 1;
  std::vector<std::uint32_t> count(static_cast<std::size_t>(nx_) * ny_ + 1, 0);
  std::vector<std::uint32_t> cell_of(pts_.size());
  for (std::size_t k = 0; k < pts_.size(); ++k) {
    int cx = std::min(nx_ - 1, static_cast<int>((pts_[k].real() - gx0_) / cell_));
    int cy = std::min(ny_ - 1, static_cast<int>((pts_[k].imag() - gy0_) / cell_));
    cell_of[k] = static_cast<std::uint32_t>(cy * nx_ + cx);
    ++count[cell_of[k] + 1];
  }
  for (std::size_t c = 1; c < count.size(); ++c) count[c] += count[c - 1];
  cell_start_ = count;
  cell_items_.assign(pts_.size(), 0);
  for (std::size_t k = 0; k < pts_.size(); ++k) cell_items_[count[cell_of[k]]++] = static_cast<std::uint32_t>(k);
}

std::pair<std::ptrdiff_t, double> PointSetWindow::nearest(cplx q) const {
  if (pts_.empty()) return {-1, kInfinity};
  if (dim_ == 1) {
    auto it = std::lower_bound(pts_.begin(), pts_.end(), q.real(),
                               [](const cplx& p, double v) { return p.real() < v; });
    std::ptrdiff_t best = -1;
    double bd = kInfinity;
    if (it != pts_.end()) {
      best = it - pts_.begin();
      bd = std::abs(it->real() - q.real());
    }
    if (it != pts_.begin()) {
      auto jt = std::prev(it);
      double d = std::abs(jt->real() - q.real());
      if (d <= bd) {
        best = jt - pts_.begin();
        bd = d;
      }
    }
    return {best, bd};
  }
  int cx = static_cast<int>(std::floor((q.real() - gx0_) / cell_));
  int cy = static_cast<int>(std::floor((q.imag() - gy0_) / cell_));
  int kmax = std::max({std::abs(cx), std::abs(cy), std::abs(cx - nx_ + 1), std::abs(cy - ny_ + 1)});
  std::ptrdiff_t best = -1;
  double bd2 = kInfinity;
  for (int k = 0; k <= kmax; ++k) {
    for (int y = cy - k; y <= cy + k; ++y) {
      if (y < 0 || y >= ny_) continue;
      bool edge_row = (y == cy - k || y == cy + k);
      int step = edge_row ? 1 : 2 * k;
      for (int x = cx - k; x <= cx + k; x += (step == 0 ? 1 : step)) {
        if (x >= 0 && x < nx_) {
          std::size_t c = static_cast<std::size_t>(y) * nx_ + x;
          for (std::uint32_t s = cell_start_[c]; s < cell_start_[c + 1]; ++s) {
            std::uint32_t idx = cell_items_[s];
            double d2 = std::norm(pts_[idx] - q);
            if (d2 < bd2 || (d2 == bd2 && static_cast<std::ptrdiff_t>(idx) < best)) {
              bd2 = d2;
              best = idx;
            }
          }
        }
        if (step == 0) break;
      }
    }
    double reach = k * cell_;
    if (best >= 0 && bd2 <= reach * reach) break;
  }
  return {best, std::sqrt(bd2)};
}

std::vector<std::size_t> PointSetWindow::within(cplx q, double r) const {
  std::vector<std::size_t> out;
  if (pts_.empty() || !(r >= 0)) return out;
  if (dim_ == 1) {
    auto lo = std::lower_bound(pts_.begin(), pts_.end(), q.real() - r,
                               [](const cplx& p, double v) { return p.real() < v; });
    for (auto it = lo; it != pts_.end() && it->real() <= q.real() + r; ++it) {
      if (std::abs(it->real() - q.real()) <= r) out.push_back(static_cast<std::size_t>(it - pts_.begin()));
    }
    return out;
  }
  int x0 = std::max(0, static_cast<int>(std::floor((q.real() - r - gx0_) / cell_)));
  int x1 = std::min(nx_ - 1, static_cast<int>(std::floor((q.real() + r - gx0_) / cell_)));
  int y0 = std::max(0, static_cast<int>(std::floor((q.imag() - r - gy0_) / cell_)));
  int y1 = std::min(ny_ - 1, static_cast<int>(std::floor((q.imag() + r - gy0_) / cell_)));
  double r2 = r * r;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      std::size_t c = static_cast<std::size_t>(y) * nx_ + x;
      for (std::uint32_t s = cell_start_[c]; s < cell_start_[c + 1]; ++s) {
        std::uint32_t idx = cell_items_[s];
        if (std::norm(pts_[idx] - q) <= r2) out.push_back(idx);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double PointSetWindow::coverage_radius(cplx c) const {
  cplx l = frame_.inverse().apply(c);
  double r = std::min(l.real() - window_.lo[0], window_.hi[0] - l.real());
  if (dim_ == 2) r = std::min({r, l.imag() - window_.lo[1], window_.hi[1] - l.imag()});
  else if (l.imag() != 0.0) return -std::abs(l.imag());
  return r;
}

bool PointSetWindow::covers_ball(cplx c, double r) const { return coverage_radius(c) >= r; }

PointSetWindow PointSetWindow::transformed(const FloatMotion& g) const {
  std::vector<cplx> q;
  q.reserve(pts_.size());
  for (const auto& p : pts_) {
    cplx z = g.apply(p);
    if (dim_ == 1) z = {z.real(), 0.0};
    q.push_back(z);
  }
  PointSetWindow out(dim_, std::move(q), window_, radius_);
  out.frame_ = g.compose(frame_);
  out.provenance = provenance;
  return out;
}

PointSetWindow PointSetWindow::transformed(const ExactMotion& g) const {
  if (!exact_) throw std::invalid_argument("exact motion applied to floating point set");
  if (dim_ == 1 && (!g.shift.is_real() || !g.unit.is_real() || g.reflect)) {
    throw std::invalid_argument("motion does not preserve the line");
  }
  std::vector<Gaussian> q;
  q.reserve(ex_.size());
  for (const auto& p : ex_) q.push_back(g.apply(p));
  PointSetWindow out(dim_, std::move(q), window_, radius_);
  out.exact_frame = g.compose(exact_frame);
  out.frame_ = to_float(out.exact_frame);
  out.provenance = provenance;
  return out;
}

PointSetWindow PointSetWindow::to_floating() const {
  PointSetWindow out(dim_, pts_, window_, radius_);
  out.frame_ = frame_;
  out.provenance = provenance;
  return out;
}

// ---- generators ----------------------------------------------------------

Gaussian two_adic_point(std::int64_t k) {
  if (k == 0) return Gaussian(0);
  int t = two_adic_valuation(k);
  if (t + 1 > 62) throw std::overflow_error("two-adic index too large");
  return Gaussian(k) + Gaussian::rational(1, std::int64_t{1} << (t + 1));
}

namespace {

void check_window(const Box& w, int dim) {
  if (w.dim != dim) throw std::invalid_argument("window dimension does not match generator");
  for (int a = 0; a < dim; ++a) {
    if (!std::isfinite(w.lo[a]) || !std::isfinite(w.hi[a])) throw std::invalid_argument("window unbounded");
    if (w.lo[a] > w.hi[a]) throw std::invalid_argument("window empty");
  }
}

PointSetWindow finish_window(PointSetWindow p, const GeneratorSpec& gen) {
  p.provenance = gen;
  return p;
}

}  // namespace

PointSetWindow realize(const GeneratorSpec& gen, const Box& window) {
  check_window(window, gen.dim);
  const auto lo = static_cast<std::int64_t>(std::floor(window.lo[0])) - 2;
  const auto hi = static_cast<std::int64_t>(std::ceil(window.hi[0])) + 2;
  switch (gen.kind) {
    case GenKind::IntegerLattice: {
      std::vector<Gaussian> pts;
      if (gen.dim == 1) {
        for (std::int64_t n = lo; n <= hi; ++n) {
          if (window.contains_exact(Gaussian(n))) pts.emplace_back(n);
        }
      } else {
        const auto ylo = static_cast<std::int64_t>(std::floor(window.lo[1]));
        const auto yhi = static_cast<std::int64_t>(std::ceil(window.hi[1]));
        for (std::int64_t x = lo; x <= hi; ++x) {
          for (std::int64_t y = ylo; y <= yhi; ++y) {
            Gaussian z(x, y);
            if (window.contains_exact(z)) pts.push_back(z);
          }
        }
      }
      return finish_window(PointSetWindow(gen.dim, std::move(pts), window, 0.5), gen);
    }
    case GenKind::TwoAdic:
    case GenKind::TwoAdicPunctured: {
      std::vector<Gaussian> pts;
      for (std::int64_t k = lo; k <= hi; ++k) {
        if (k == 0 && gen.kind == GenKind::TwoAdicPunctured) continue;
        Gaussian p = two_adic_point(k);
        if (window.contains_exact(p)) pts.push_back(p);
      }
      return finish_window(PointSetWindow(1, std::move(pts), window, 0.25), gen);
    }
    case GenKind::Bohr: {
      double total = 0.0;
      for (const auto& t : gen.trig) total += std::abs(t.amplitude);
      if (total > 1.0 / 3.0 + 1e-12) throw std::domain_error("trigonometric amplitudes exceed 1/3 in total");
      std::vector<cplx> pts;
      for (std::int64_t n = lo; n <= hi; ++n) {
        double x = static_cast<double>(n) + trig_eval(gen.trig, static_cast<double>(n));
        if (window.contains({x, 0.0})) pts.emplace_back(x, 0.0);
      }
      return finish_window(PointSetWindow(1, std::move(pts), window, 1.0 / 6.0), gen);
    }
    case GenKind::HalfLineDefect: {
      std::vector<Gaussian> pts;
      for (std::int64_t n = lo; n <= hi; ++n) {
        if (n >= 0 && n % 2 != 0) continue;
        if (window.contains_exact(Gaussian(n))) pts.emplace_back(n);
      }
      return finish_window(PointSetWindow(1, std::move(pts), window, 0.5), gen);
    }
    case GenKind::DecoratedTiling: {
      return finish_window(decorated_tiling(gen.rule, gen.level, gen.exact, window), gen);
    }
  }
  throw std::invalid_argument("malformed generator");
}

std::vector<double> neighbor_gap_spectrum(const PointSetWindow& p) {
  if (p.dim() != 1) throw std::invalid_argument("gap spectrum needs dimension 1");
  if (p.size() < 2) throw std::invalid_argument("gap spectrum needs at least two points");
  std::vector<double> g;
  for (std::size_t k = 1; k < p.size(); ++k) g.push_back(p.points()[k].real() - p.points()[k - 1].real());
  std::sort(g.begin(), g.end());
  return g;
}

std::vector<Gaussian> neighbor_gap_spectrum_exact(const PointSetWindow& p) {
  if (p.dim() != 1) throw std::invalid_argument("gap spectrum needs dimension 1");
  if (p.size() < 2) throw std::invalid_argument("gap spectrum needs at least two points");
  if (!p.is_exact()) throw std::invalid_argument("exact gap spectrum needs exact points");
  std::vector<Gaussian> g;
  for (std::size_t k = 1; k < p.size(); ++k) g.push_back(p.exact_points()[k] - p.exact_points()[k - 1]);
  std::sort(g.begin(), g.end(), real_less);
  return g;
}

bool thickening_contains(const PointSetWindow& p, cplx q, double eps) {
  auto [idx, d] = p.nearest(q);
  return idx >= 0 && d < eps;
}

bool thickening_contains_exact(const PointSetWindow& p, const Gaussian& q, const Gaussian& eps) {
  if (!p.is_exact()) throw std::invalid_argument("exact thickening needs exact points");
  Gaussian e2 = eps * eps;
  double slack = eps.real_d() * (1.0 + 1e-9) + 1e-9;
  for (std::size_t idx : p.within(q.to_complex(), slack)) {
    if (real_less((p.exact_points()[idx] - q).norm(), e2)) return true;
  }
  return false;
}

}  // namespace delone

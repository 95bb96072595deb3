#include "delone/render.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

namespace delone {

namespace {

std::string fixed(double v, int digits = 3) {
  if (std::fabs(v) < 0.5 * std::pow(10.0, -digits)) v = 0.0;
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
  return std::string(buf, res.ptr);
}

struct Viewport {
  Box view;
  double scale = 1.0;
  double width = 0.0;
  double height = 0.0;

  double px(double x) const { return (x - view.lo[0]) * scale; }
  double py(double y) const { return (view.hi[1] - y) * scale; }
};

Viewport make_viewport(const Box& view, double width) {
  Viewport v;
  v.view = view;
  double w = std::max(view.hi[0] - view.lo[0], 1e-9);
  double h = std::max(view.hi[1] - view.lo[1], 1e-9);
  v.scale = width / w;
  v.width = width;
  v.height = h * v.scale;
  return v;
}

Box bounds_of(const std::vector<cplx>& pts, double pad) {
  if (pts.empty()) return Box::square(0.0, 0.0, 1.0, 1.0);
  Box b = Box::square(pts[0].real(), pts[0].imag(), pts[0].real(), pts[0].imag());
  for (const auto& z : pts) {
    b.lo[0] = std::min(b.lo[0], z.real());
    b.lo[1] = std::min(b.lo[1], z.imag());
    b.hi[0] = std::max(b.hi[0], z.real());
    b.hi[1] = std::max(b.hi[1], z.imag());
  }
  return b.expanded(pad);
}

std::string header(double w, double h) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(w, 1) +
         "\" height=\"" + fixed(h, 1) + "\" viewBox=\"0 0 " + fixed(w, 1) + " " + fixed(h, 1) + "\">\n";
}

std::string fill_color(int type, int bucket, int buckets, bool reflect) {
  int hue = (type * 137 + 20) % 360;
  int light = buckets > 1 ? 30 + (45 * bucket) / (buckets - 1) : 55;
  int sat = reflect ? 40 : 70;
  return "hsl(" + std::to_string(hue) + "," + std::to_string(sat) + "%," + std::to_string(light) + "%)";
}

}  // namespace

int orientation_bucket(const ExactMotion& g, int buckets) {
  if (buckets <= 1) return 0;
  double a = std::arg(g.unit.to_complex());
  if (a < 0) a += 2 * std::numbers::pi;
  int b = static_cast<int>(std::floor(a / (2 * std::numbers::pi) * buckets));
  return std::clamp(b, 0, buckets - 1);
}

std::string render_tiles_svg(const SubstitutionRule& rule, const std::vector<Tile>& tiles, const RenderStyle& style) {
  std::vector<std::vector<cplx>> polys;
  std::vector<cplx> all;
  polys.reserve(tiles.size());
  for (const auto& t : tiles) {
    polys.push_back(to_float(transform(t.g, rule.prototiles.at(t.type).outline)));
    all.insert(all.end(), polys.back().begin(), polys.back().end());
  }
  Box view = style.view ? *style.view : bounds_of(all, 0.0);
  if (!style.view && !all.empty()) view = view.expanded(0.02 * std::max(view.hi[0] - view.lo[0], view.hi[1] - view.lo[1]));
  Viewport vp = make_viewport(view, style.width);
  double stroke = style.stroke > 0 ? style.stroke * vp.scale : 0.5;

  std::string out = header(vp.width, vp.height);
  out += "<g stroke=\"#222\" stroke-width=\"" + fixed(stroke) + "\" stroke-linejoin=\"round\">\n";
  for (std::size_t i = 0; i < tiles.size(); ++i) {
    out += "<polygon points=\"";
    for (std::size_t k = 0; k < polys[i].size(); ++k) {
      if (k) out += ' ';
      out += fixed(vp.px(polys[i][k].real())) + "," + fixed(vp.py(polys[i][k].imag()));
    }
    out += "\" fill=\"" +
           fill_color(tiles[i].type, orientation_bucket(tiles[i].g, style.orientation_buckets), style.orientation_buckets,
                      tiles[i].g.reflect) +
           "\"/>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

std::string render_points_svg(const PointSetWindow& p, const RenderStyle& style) {
  const double r = style.point_radius > 0 ? style.point_radius : 0.5 * p.radius();
  if (p.dim() == 1) {
    Box view = style.view ? *style.view : p.window();
    if (view.hi[0] <= view.lo[0]) view = Box::interval(view.lo[0], view.lo[0] + 1.0);
    const double w = style.width;
    const double h = 60.0;
    const double scale = w / (view.hi[0] - view.lo[0]);
    auto px = [&](double x) { return (x - view.lo[0]) * scale; };
    std::string out = header(w, h);
    out += "<line x1=\"0.000\" y1=\"30.000\" x2=\"" + fixed(w) + "\" y2=\"30.000\" stroke=\"#222\" stroke-width=\"1.000\"/>\n";
    out += "<text x=\"2.000\" y=\"55.000\" font-size=\"10\">" + fixed(view.lo[0]) + "</text>\n";
    out += "<text x=\"" + fixed(w - 2.0) + "\" y=\"55.000\" font-size=\"10\" text-anchor=\"end\">" + fixed(view.hi[0]) +
           "</text>\n";
    const std::string rad = fixed(std::max(r * scale, 1.0));
    out += "<g fill=\"#1f5fa8\">\n";
    for (const auto& z : p.points()) {
      if (z.real() < view.lo[0] || z.real() > view.hi[0]) continue;
      out += "<circle cx=\"" + fixed(px(z.real())) + "\" cy=\"30.000\" r=\"" + rad + "\"/>\n";
    }
    out += "</g>\n</svg>\n";
    return out;
  }
  Box view = style.view ? *style.view : (p.empty() ? Box::square(0.0, 0.0, 1.0, 1.0) : p.window());
  if (view.dim != 2 || view.hi[0] <= view.lo[0] || view.hi[1] <= view.lo[1]) view = bounds_of(p.points(), r);
  Viewport vp = make_viewport(view, style.width);
  std::string out = header(vp.width, vp.height);
  const std::string rad = fixed(std::max(r * vp.scale, 0.5));
  out += "<g fill=\"#1f5fa8\">\n";
  for (const auto& z : p.points()) {
    if (z.real() < view.lo[0] || z.real() > view.hi[0] || z.imag() < view.lo[1] || z.imag() > view.hi[1]) continue;
    out += "<circle cx=\"" + fixed(vp.px(z.real())) + "\" cy=\"" + fixed(vp.py(z.imag())) + "\" r=\"" + rad + "\"/>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace delone

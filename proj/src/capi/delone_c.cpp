#include "delone/delone.h"

#include <cstring>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>

#include "delone/decorate.hpp"
#include "delone/ergodic.hpp"
#include "delone/io.hpp"
#include "delone/metrics.hpp"
#include "delone/render.hpp"
#include "delone/repet.hpp"
#include "delone/subst.hpp"

struct delone_pointset {
  delone::PointSetWindow p;
};

struct delone_rule {
  explicit delone_rule(delone::SubstitutionRule r) : rule(std::move(r)) {}

  delone::SubstitutionRule rule;

  const delone::Decoration& decoration() const {
    std::call_once(once, [this] { dec = std::make_unique<delone::Decoration>(delone::build_decoration(rule)); });
    return *dec;
  }

 private:
  mutable std::once_flag once;
  mutable std::unique_ptr<delone::Decoration> dec;
};

struct delone_tiles {
  std::vector<delone::Tile> tiles;
};

namespace {

using delone::json;

thread_local std::string g_error;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class F>
int guarded(F&& body) {
  try {
    g_error.clear();
    body();
    return DELONE_OK;
  } catch (const UsageError& e) {
    g_error = e.what();
    return DELONE_EUSAGE;
  } catch (const std::invalid_argument& e) {
    g_error = e.what();
    return DELONE_EUSAGE;
  } catch (const json::exception& e) {
    g_error = std::string("malformed input: ") + e.what();
    return DELONE_EDOMAIN;
  } catch (const std::exception& e) {
    g_error = e.what();
    return DELONE_EDOMAIN;
  } catch (...) {
    g_error = "unknown failure";
    return DELONE_EDOMAIN;
  }
}

template <class T>
void need(const T* p, const char* what) {
  if (!p) throw UsageError(std::string("null argument: ") + what);
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json parse(const char* text, const char* what) {
  if (!text || !*text) return json::object();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("cannot parse ") + what + ": " + e.what());
  }
}

delone::cplx cplx_from(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  return {j.at(0).get<double>(), j.size() > 1 ? j.at(1).get<double>() : 0.0};
}

std::vector<delone::cplx> cplx_list(const json& j) {
  std::vector<delone::cplx> out;
  for (const auto& e : j) out.push_back(cplx_from(e));
  return out;
}

delone::RepetitivityOptions options_from(const json& j) {
  delone::RepetitivityOptions o;
  o.r_centers = j.value("r_centers", o.r_centers);
  o.big_centers = j.value("big_centers", o.big_centers);
  o.seed = j.value("seed", o.seed);
  o.wiggle = j.value("wiggle", false);
  if (j.contains("sample_region")) o.sample_region = delone::box_from_json(j.at("sample_region"));
  if (j.contains("r_center_list")) o.r_center_list = cplx_list(j.at("r_center_list"));
  if (j.contains("big_center_list")) o.big_center_list = cplx_list(j.at("big_center_list"));
  return o;
}

delone::WeightFunctionSpec weight_from(const json& j) {
  const std::string kind = j.value("kind", std::string("smoothed-count"));
  if (kind == "constant") return delone::WeightFunctionSpec::constant_value(j.value("constant", 0.0));
  if (kind != "smoothed-count") throw UsageError("unknown weight kind: " + kind);
  const double w = j.value("window", 1.0);
  const double b = j.value("bump", 1.0);
  if (!(w > 0) || !(b > 0)) throw UsageError("weight window and bump must be positive");
  return delone::WeightFunctionSpec::smoothed_count(w, b);
}

delone::RenderStyle style_from(const json& j) {
  delone::RenderStyle s;
  s.width = j.value("width", s.width);
  s.stroke = j.value("stroke", s.stroke);
  s.point_radius = j.value("point_radius", s.point_radius);
  s.orientation_buckets = j.value("orientation_buckets", s.orientation_buckets);
  if (j.contains("view")) s.view = delone::box_from_json(j.at("view"));
  if (!(s.width > 0)) throw UsageError("width must be positive");
  return s;
}

json matrix_json(const delone::IntMatrix& m) {
  json out = json::array();
  for (const auto& row : m) out.push_back(row);
  return out;
}

const char* verdict_name(delone::DtoVerdict v) {
  switch (v) {
    case delone::DtoVerdict::CertifiedIrrational: return "certified-irrational";
    case delone::DtoVerdict::HeuristicIrrational: return "heuristic-irrational";
    case delone::DtoVerdict::NoneFound: break;
  }
  return "none-found";
}

delone_pointset* wrap(delone::PointSetWindow p) { return new delone_pointset{std::move(p)}; }

}  // namespace

extern "C" {

const char* delone_last_error(void) { return g_error.c_str(); }
const char* delone_version(void) { return "1.0.0"; }
void delone_free_string(char* s) { std::free(s); }

// ---- point sets ----

int delone_pointset_generate(const char* generator_json, const char* window_json, delone_pointset** out) {
  return guarded([&] {
    need(out, "out");
    need(generator_json, "generator");
    need(window_json, "window");
    auto gen = delone::generator_from_json(parse(generator_json, "generator"));
    auto win = delone::box_from_json(parse(window_json, "window"));
    if (win.dim != gen.dim) throw UsageError("window dimension does not match the generator");
    *out = wrap(delone::realize(gen, win));
  });
}

int delone_pointset_from_json(const char* text, delone_pointset** out) {
  return guarded([&] {
    need(out, "out");
    need(text, "json");
    *out = wrap(delone::pointset_from_json(parse(text, "point set")));
  });
}

int delone_pointset_to_json(const delone_pointset* p, char** out) {
  return guarded([&] {
    need(p, "pointset");
    need(out, "out");
    *out = dup(delone::to_json(p->p).dump());
  });
}

int delone_pointset_size(const delone_pointset* p, size_t* n) {
  return guarded([&] {
    need(p, "pointset");
    need(n, "n");
    *n = p->p.size();
  });
}

int delone_pointset_dim(const delone_pointset* p, int* dim) {
  return guarded([&] {
    need(p, "pointset");
    need(dim, "dim");
    *dim = p->p.dim();
  });
}

int delone_pointset_translate(const delone_pointset* p, double x, double y, delone_pointset** out) {
  return guarded([&] {
    need(p, "pointset");
    need(out, "out");
    if (p->p.dim() == 1 && y != 0.0) throw UsageError("1D sets only translate along the line");
    *out = wrap(p->p.translated({x, y}));
  });
}

int delone_pointset_rotate(const delone_pointset* p, double theta, delone_pointset** out) {
  return guarded([&] {
    need(p, "pointset");
    need(out, "out");
    if (p->p.dim() != 2) throw UsageError("rotation needs a 2D set");
    *out = wrap(p->p.transformed(delone::FloatMotion::rotation(theta)));
  });
}

void delone_pointset_free(delone_pointset* p) { delete p; }

// ---- metrics ----

int delone_metric_lr(const delone_pointset* a, const delone_pointset* b, double* value, int* window_limited) {
  return guarded([&] {
    need(a, "a");
    need(b, "b");
    need(value, "value");
    auto r = delone::local_rubber_distance(a->p, b->p);
    *value = r.value;
    if (window_limited) *window_limited = r.window_limited ? 1 : 0;
  });
}

int delone_metric_lm(const delone_pointset* a, const delone_pointset* b, double* lower, double* upper,
                     int* certified) {
  return guarded([&] {
    need(a, "a");
    need(b, "b");
    need(lower, "lower");
    need(upper, "upper");
    auto r = delone::local_matching_distance(a->p, b->p);
    *lower = r.lower;
    *upper = r.upper;
    if (certified) *certified = r.certified ? 1 : 0;
  });
}

int delone_metric_v(const delone_pointset* a, const delone_pointset* b, double cx, double cy, double radius,
                    double* value) {
  return guarded([&] {
    need(a, "a");
    need(b, "b");
    need(value, "value");
    if (!(radius >= 0)) throw UsageError("radius must be nonnegative");
    *value = delone::pattern_deviation(a->p, b->p, delone::Region::ball({cx, cy}, radius));
  });
}

int delone_metric_wiggle(const delone_pointset* a, const delone_pointset* b, double cx, double cy, double radius,
                         double step, double* upper, double* lower, double* theta, double* theta_prime) {
  return guarded([&] {
    need(a, "a");
    need(b, "b");
    need(upper, "upper");
    if (!(radius >= 0)) throw UsageError("radius must be nonnegative");
    if (!(step > 0)) throw UsageError("angle step must be positive");
    auto r = delone::wiggle_deviation(a->p, b->p, delone::Region::ball({cx, cy}, radius), step);
    *upper = r.upper;
    if (lower) *lower = r.lower;
    if (theta) *theta = r.theta;
    if (theta_prime) *theta_prime = r.theta_prime;
  });
}

// ---- rules and tiles ----

int delone_rule_builtin(const char* name, delone_rule** out) {
  return guarded([&] {
    need(name, "name");
    need(out, "out");
    *out = new delone_rule(delone::builtin_rule(name));
  });
}

int delone_rule_from_json(const char* text, delone_rule** out) {
  return guarded([&] {
    need(text, "json");
    need(out, "out");
    *out = new delone_rule(delone::rule_from_json(parse(text, "rule")));
  });
}

int delone_rule_to_json(const delone_rule* r, char** out) {
  return guarded([&] {
    need(r, "rule");
    need(out, "out");
    *out = dup(delone::to_json(r->rule).dump());
  });
}

int delone_rule_report(const delone_rule* r, int max_order, char** out_json) {
  return guarded([&] {
    need(r, "rule");
    need(out_json, "out");
    if (max_order < 1) throw UsageError("max order must be positive");
    json rep = {{"rule", r->rule.name}, {"lambda", r->rule.lambda()}, {"r0", r->rule.r0_angle()},
                {"mult", delone::to_json(r->rule.mult)}, {"group", r->rule.group}};
    try {
      delone::verify_rule(r->rule);
      rep["verified"] = true;
    } catch (const std::domain_error& e) {
      rep["verified"] = false;
      rep["verify_error"] = e.what();
    }
    auto m = delone::substitution_matrix(r->rule);
    auto prim = delone::is_primitive(m);
    rep["matrix"] = matrix_json(m);
    rep["primitive"] = prim.primitive;
    rep["primitive_power"] = prim.power;
    auto w = delone::dto_witness(r->rule, max_order);
    json dto = {{"verdict", verdict_name(w.verdict)}, {"order", w.order}};
    if (w.verdict != delone::DtoVerdict::NoneFound) {
      dto["first"] = delone::to_json(w.first);
      dto["second"] = delone::to_json(w.second);
      dto["relative"] = delone::to_json(w.relative);
    }
    rep["dto"] = dto;
    *out_json = dup(rep.dump());
  });
}

void delone_rule_free(delone_rule* r) { delete r; }

int delone_tiles_supertile(const delone_rule* r, int type, int level, delone_tiles** out) {
  return guarded([&] {
    need(r, "rule");
    need(out, "out");
    if (type < 0 || type >= static_cast<int>(r->rule.prototiles.size())) throw UsageError("no such prototile");
    if (level < 0) throw UsageError("level must be nonnegative");
    *out = new delone_tiles{delone::supertile(r->rule, type, level).leaves()};
  });
}

int delone_tiles_substitute(const delone_rule* r, const delone_tiles* t, int times, delone_tiles** out) {
  return guarded([&] {
    need(r, "rule");
    need(t, "tiles");
    need(out, "out");
    if (times < 0) throw UsageError("times must be nonnegative");
    std::vector<delone::Tile> cur = t->tiles;
    for (int i = 0; i < times; ++i) cur = delone::substitute(r->rule, cur, i == 0);
    *out = new delone_tiles{std::move(cur)};
  });
}

int delone_tiles_from_json(const char* text, delone_tiles** out) {
  return guarded([&] {
    need(text, "json");
    need(out, "out");
    *out = new delone_tiles{delone::tiles_from_json(parse(text, "tiles"))};
  });
}

int delone_tiles_to_json(const delone_rule* r, const delone_tiles* t, char** out) {
  return guarded([&] {
    need(r, "rule");
    need(t, "tiles");
    need(out, "out");
    *out = dup(delone::tiles_to_json(r->rule.name, t->tiles).dump());
  });
}

int delone_tiles_count(const delone_tiles* t, size_t* n) {
  return guarded([&] {
    need(t, "tiles");
    need(n, "n");
    *n = t->tiles.size();
  });
}

void delone_tiles_free(delone_tiles* t) { delete t; }

// ---- decoration ----

int delone_decorate(const delone_rule* r, const delone_tiles* t, delone_pointset** out) {
  return guarded([&] {
    need(r, "rule");
    need(t, "tiles");
    need(out, "out");
    *out = wrap(delone::decorate(r->decoration(), t->tiles));
  });
}

int delone_undecorate(const delone_rule* r, const delone_pointset* p, delone_tiles** out) {
  return guarded([&] {
    need(r, "rule");
    need(p, "pointset");
    need(out, "out");
    *out = new delone_tiles{delone::undecorate(r->rule, r->decoration(), p->p)};
  });
}

// ---- repetitivity ----

int delone_repet_period(const delone_pointset* p, const char* config_json, char** out_json) {
  return guarded([&] {
    need(p, "pointset");
    need(out_json, "out");
    json cfg = parse(config_json, "config");
    const double eps = cfg.at("eps").get<double>();
    if (!(eps > 0)) throw UsageError("eps must be positive");
    const std::string mode_name = cfg.value("mode", std::string("LR"));
    if (mode_name != "LR" && mode_name != "V") throw UsageError("mode must be LR or V");
    const auto mode = mode_name == "LR" ? delone::PeriodMode::LR : delone::PeriodMode::V;
    std::optional<delone::Region> v;
    if (cfg.contains("ball"))
      v = delone::Region::ball(cplx_from(cfg["ball"].at("center")), cfg["ball"].at("radius").get<double>());
    if (mode == delone::PeriodMode::V && !v) throw UsageError("mode V needs a ball");
    const json grid = cfg.value("grid", json::object());
    const auto lo = grid.value("lo", std::int64_t{-16});
    const auto hi = grid.value("hi", std::int64_t{16});
    const double step = grid.value("step", 1.0);
    if (lo > hi || !(step > 0)) throw UsageError("empty grid");
    auto shifts = delone::integer_grid(p->p.dim(), lo, hi);
    for (auto& x : shifts) x *= step;
    delone::Box region = cfg.contains("region")
                             ? delone::box_from_json(cfg["region"])
                             : (p->p.dim() == 1 ? delone::Box::interval(lo * step, hi * step)
                                                : delone::Box::square(lo * step, lo * step, hi * step, hi * step));
    *out_json = dup(delone::to_json(delone::period_set(p->p, eps, mode, v, shifts, region)).dump());
  });
}

int delone_repet_radius(const delone_pointset* p, double r, double eps, const char* options_json, char** out_json) {
  return guarded([&] {
    need(p, "pointset");
    need(out_json, "out");
    if (!(r > 0) || !(eps >= 0)) throw UsageError("need r > 0 and eps >= 0");
    auto est = delone::repetitivity_radius(p->p, r, eps, options_from(parse(options_json, "options")));
    *out_json = dup(delone::to_json(est).dump());
  });
}

int delone_repet_curve(const delone_pointset* p, const double* rs, size_t nr, const double* epss, size_t ne,
                       const char* options_json, char** out_json, char** out_csv) {
  return guarded([&] {
    need(p, "pointset");
    need(rs, "rs");
    need(epss, "eps");
    if (nr == 0 || ne == 0) throw UsageError("need at least one r and one eps");
    std::vector<double> r(rs, rs + nr), e(epss, epss + ne);
    for (double v : r)
      if (!(v > 0)) throw UsageError("r must be positive");
    for (double v : e)
      if (!(v >= 0)) throw UsageError("eps must be nonnegative");
    auto curve = delone::repetitivity_curve(p->p, r, e, options_from(parse(options_json, "options")));
    if (out_json) {
      json pts = json::array();
      for (const auto& c : curve.points)
        pts.push_back({{"r", c.r},
                       {"eps", c.eps},
                       {"R_hat", std::isfinite(c.r_hat) ? json(c.r_hat) : json(nullptr)},
                       {"samples", c.samples},
                       {"failed", c.failed}});
      json fits = json::array();
      for (const auto& f : curve.fits)
        fits.push_back({{"eps", f.eps},
                        {"slope", f.slope},
                        {"intercept", f.intercept},
                        {"max_ratio", std::isfinite(f.max_ratio) ? json(f.max_ratio) : json(nullptr)},
                        {"linear", f.linear}});
      *out_json = dup(json({{"points", pts}, {"fits", fits}, {"failed", curve.failed}}).dump());
    }
    if (out_csv) *out_csv = dup(delone::curve_csv(curve));
  });
}

// ---- ergodic ----

int delone_ergodic_density(const delone_pointset* p, const char* weight_json, const double* us, size_t nu,
                           size_t samples, uint64_t seed, char** out_json, char** out_csv) {
  return guarded([&] {
    need(p, "pointset");
    need(us, "us");
    if (nu == 0 || samples == 0) throw UsageError("need at least one U and one sample");
    for (size_t i = 0; i < nu; ++i)
      if (!(us[i] > 0)) throw UsageError("U must be positive");
    auto c = delone::density_curve(weight_from(parse(weight_json, "weight")), p->p, std::vector<double>(us, us + nu),
                                   samples, seed);
    if (out_json) *out_json = dup(delone::to_json(c).dump());
    if (out_csv) *out_csv = dup(delone::density_csv(c));
  });
}

int delone_ergodic_birkhoff(const delone_pointset* p, const char* weight_json, double n, const double* angles,
                            size_t na, double* value) {
  return guarded([&] {
    need(p, "pointset");
    need(value, "value");
    if (!(n > 0)) throw UsageError("n must be positive");
    if (na > 0) need(angles, "angles");
    std::vector<double> a;
    if (na > 0) a.assign(angles, angles + na);
    *value = delone::birkhoff_average(weight_from(parse(weight_json, "weight")), p->p, n, a);
  });
}

int delone_ergodic_decompose(const char* box_json, const char* u_json, const char* w_json, char** out_json) {
  return guarded([&] {
    need(box_json, "box");
    need(u_json, "u");
    need(w_json, "w");
    need(out_json, "out");
    json jb = parse(box_json, "box");
    delone::SquarishBox b;
    b.dim = jb.at("dim").get<int>();
    if (b.dim != 1 && b.dim != 2) throw UsageError("box dimension must be 1 or 2");
    for (int a = 0; a < b.dim; ++a) {
      b.lo[a] = delone::gaussian_from_json(jb.at("lo").at(a));
      b.hi[a] = delone::gaussian_from_json(jb.at("hi").at(a));
    }
    auto u = delone::gaussian_from_json(parse(u_json, "u"));
    auto w = delone::gaussian_from_json(parse(w_json, "w"));
    auto parts = delone::squarish_decompose(b, u, w);
    json arr = json::array();
    for (const auto& s : parts) {
      json lo = json::array(), hi = json::array();
      for (int a = 0; a < s.dim; ++a) {
        lo.push_back(delone::to_json(s.lo[a]));
        hi.push_back(delone::to_json(s.hi[a]));
      }
      arr.push_back({{"lo", lo}, {"hi", hi}});
    }
    *out_json = dup(json({{"count", parts.size()}, {"boxes", arr}}).dump());
  });
}

// ---- output ----

int delone_render_pointset_svg(const delone_pointset* p, const char* style_json, char** out) {
  return guarded([&] {
    need(p, "pointset");
    need(out, "out");
    *out = dup(delone::render_points_svg(p->p, style_from(parse(style_json, "style"))));
  });
}

int delone_render_tiles_svg(const delone_rule* r, const delone_tiles* t, const char* style_json, char** out) {
  return guarded([&] {
    need(r, "rule");
    need(t, "tiles");
    need(out, "out");
    for (const auto& tile : t->tiles)
      if (tile.type < 0 || tile.type >= static_cast<int>(r->rule.prototiles.size()))
        throw UsageError("tile type not in rule");
    *out = dup(delone::render_tiles_svg(r->rule, t->tiles, style_from(parse(style_json, "style"))));
  });
}

int delone_content_hash(const char* data, size_t len, char** out) {
  return guarded([&] {
    need(out, "out");
    if (len > 0) need(data, "data");
    *out = dup(delone::git_blob_hash(std::string_view(data ? data : "", len)));
  });
}

int delone_write_file(const char* path, const char* data, size_t len) {
  return guarded([&] {
    need(path, "path");
    if (len > 0) need(data, "data");
    delone::write_file_atomic(path, std::string_view(data ? data : "", len));
  });
}

}  // extern "C"

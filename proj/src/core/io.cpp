#include "delone/io.hpp"

#include <openssl/evp.h>
#include <unistd.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace delone {

namespace {

json num_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }
cplx cplx_from(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

void expect_schema(const json& j, const char* schema) {
  if (!j.contains("schema") || j.at("schema") != schema)
    throw std::invalid_argument(std::string("expected schema ") + schema);
}

}  // namespace

// ---- scalars and motions ---------------------------------------------------

json to_json(const Gaussian& g) {
  if (g.is_real()) return json::array({g.re_num(), g.den()});
  return json::array({g.re_num(), g.im_num(), g.den()});
}

Gaussian gaussian_from_json(const json& j) {
  if (j.is_number_integer()) return Gaussian(j.get<std::int64_t>());
  if (!j.is_array()) throw std::invalid_argument("exact scalar must be an integer tuple");
  for (const auto& e : j)
    if (!e.is_number_integer()) throw std::invalid_argument("exact scalar must be an integer tuple");
  switch (j.size()) {
    case 2: {
      auto den = j[1].get<std::int64_t>();
      if (den == 0) throw std::invalid_argument("zero denominator");
      return Gaussian::rational(j[0].get<std::int64_t>(), den);
    }
    case 3: {
      auto den = j[2].get<std::int64_t>();
      if (den == 0) throw std::invalid_argument("zero denominator");
      return Gaussian(j[0].get<std::int64_t>(), j[1].get<std::int64_t>(), den);
    }
    case 4:
      return Gaussian::from_ring(j[0].get<std::int64_t>(), j[1].get<std::int64_t>(), j[2].get<int>(), j[3].get<int>());
    default:
      throw std::invalid_argument("exact scalar must have 2, 3 or 4 entries");
  }
}

json to_json(const ExactMotion& m) {
  return {{"shift", to_json(m.shift)}, {"unit", to_json(m.unit)}, {"reflect", m.reflect}};
}

ExactMotion motion_from_json(const json& j) {
  ExactMotion m{gaussian_from_json(j.at("shift")), gaussian_from_json(j.at("unit")), j.value("reflect", false)};
  if (m.unit.norm() != Gaussian(1)) throw std::invalid_argument("motion unit must have modulus 1");
  return m;
}

json to_json(const FloatMotion& m) {
  return {{"shift", cplx_json(m.shift)}, {"unit", cplx_json(m.unit)}, {"reflect", m.reflect}};
}

FloatMotion float_motion_from_json(const json& j) {
  return {cplx_from(j.at("shift")), cplx_from(j.at("unit")), j.value("reflect", false)};
}

json to_json(const Box& b) {
  if (b.dim == 1) return {{"dim", 1}, {"lo", json::array({b.lo[0]})}, {"hi", json::array({b.hi[0]})}};
  return {{"dim", 2}, {"lo", json::array({b.lo[0], b.lo[1]})}, {"hi", json::array({b.hi[0], b.hi[1]})}};
}

Box box_from_json(const json& j) {
  Box b;
  b.dim = j.at("dim").get<int>();
  if (b.dim != 1 && b.dim != 2) throw std::invalid_argument("box dimension must be 1 or 2");
  for (int a = 0; a < b.dim; ++a) {
    b.lo[a] = j.at("lo").at(a).get<double>();
    b.hi[a] = j.at("hi").at(a).get<double>();
  }
  return b;
}

// ---- generators and point sets ---------------------------------------------

json to_json(const GeneratorSpec& g) {
  json trig = json::array();
  for (const auto& t : g.trig) trig.push_back({{"amplitude", t.amplitude}, {"frequency", t.frequency}, {"phase", t.phase}});
  return {{"kind", kind_name(g.kind)}, {"dim", g.dim},     {"rule", g.rule},
          {"level", g.level},          {"exact", g.exact}, {"trig", trig}};
}

GeneratorSpec generator_from_json(const json& j) {
  GeneratorSpec g;
  g.kind = kind_from_name(j.at("kind").get<std::string>());
  g.dim = j.value("dim", g.kind == GenKind::DecoratedTiling ? 2 : 1);
  g.rule = j.value("rule", std::string());
  g.level = j.value("level", 0);
  g.exact = j.value("exact", g.kind != GenKind::Bohr);
  if (j.contains("trig")) {
    for (const auto& t : j.at("trig")) g.trig.push_back({t.at("amplitude").get<double>(), t.at("frequency").get<double>(), t.value("phase", 0.0)});
  } else if (g.kind == GenKind::Bohr) {
    g.trig = GeneratorSpec::bohr_golden().trig;
  }
  return g;
}

json to_json(const PointSetWindow& p) {
  json pts = json::array();
  if (p.is_exact()) {
    for (const auto& z : p.exact_points()) pts.push_back(to_json(z));
  } else {
    for (const auto& z : p.points()) pts.push_back(p.dim() == 1 ? json(z.real()) : cplx_json(z));
  }
  json out = {{"schema", kPointSetSchema},       {"dim", p.dim()},           {"exact", p.is_exact()},
              {"radius", p.radius()},            {"window", to_json(p.window())}, {"frame", to_json(p.frame())},
              {"provenance", to_json(p.provenance)}, {"points", pts}};
  if (p.is_exact()) out["exact_frame"] = to_json(p.exact_frame);
  return out;
}

PointSetWindow pointset_from_json(const json& j) {
  expect_schema(j, kPointSetSchema);
  const int dim = j.at("dim").get<int>();
  if (dim != 1 && dim != 2) throw std::invalid_argument("dimension must be 1 or 2");
  const Box window = box_from_json(j.at("window"));
  const double radius = j.at("radius").get<double>();
  PointSetWindow out;
  if (j.at("exact").get<bool>()) {
    std::vector<Gaussian> pts;
    for (const auto& e : j.at("points")) pts.push_back(gaussian_from_json(e));
    out = PointSetWindow(dim, std::move(pts), window, radius);
  } else {
    std::vector<cplx> pts;
    for (const auto& e : j.at("points")) pts.push_back(cplx_from(e));
    out = PointSetWindow(dim, std::move(pts), window, radius);
  }
  if (j.contains("provenance")) out.provenance = generator_from_json(j.at("provenance"));
  FloatMotion f = j.contains("frame") ? float_motion_from_json(j.at("frame")) : FloatMotion::identity();
  ExactMotion e = j.contains("exact_frame") ? motion_from_json(j.at("exact_frame")) : ExactMotion::identity();
  out.set_frame(f, e);
  return out;
}

bool same_pointset(const PointSetWindow& a, const PointSetWindow& b) {
  const auto& wa = a.window();
  const auto& wb = b.window();
  const auto& fa = a.frame();
  const auto& fb = b.frame();
  return a.dim() == b.dim() && a.is_exact() == b.is_exact() && a.radius() == b.radius() && wa.dim == wb.dim &&
         wa.lo == wb.lo && wa.hi == wb.hi && fa.shift == fb.shift && fa.unit == fb.unit && fa.reflect == fb.reflect &&
         a.exact_frame == b.exact_frame && a.points() == b.points() && a.exact_points() == b.exact_points() &&
         to_json(a.provenance) == to_json(b.provenance);
}

// ---- tiles and rules -----------------------------------------------------------

json to_json(const Tile& t) { return {{"type", t.type}, {"g", to_json(t.g)}}; }

Tile tile_from_json(const json& j) { return {j.at("type").get<int>(), motion_from_json(j.at("g"))}; }

json tiles_to_json(const std::string& rule, const std::vector<Tile>& tiles) {
  json arr = json::array();
  for (const auto& t : tiles) arr.push_back(to_json(t));
  return {{"schema", kTilesSchema}, {"rule", rule}, {"tiles", arr}};
}

std::vector<Tile> tiles_from_json(const json& j, std::string* rule) {
  expect_schema(j, kTilesSchema);
  if (rule) *rule = j.value("rule", std::string());
  std::vector<Tile> out;
  for (const auto& t : j.at("tiles")) out.push_back(tile_from_json(t));
  return out;
}

namespace {

json polygon_json(const Polygon& p) {
  json arr = json::array();
  for (const auto& v : p) arr.push_back(to_json(v));
  return arr;
}

Polygon polygon_from(const json& j) {
  Polygon p;
  for (const auto& v : j) p.push_back(gaussian_from_json(v));
  return p;
}

}  // namespace

json to_json(const SubstitutionRule& r) {
  json protos = json::array();
  for (const auto& p : r.prototiles) {
    json pieces = json::array();
    for (const auto& piece : p.pieces) pieces.push_back(polygon_json(piece));
    json syms = json::array();
    for (const auto& h : p.symmetries) syms.push_back(to_json(h));
    protos.push_back({{"index", p.index}, {"outline", polygon_json(p.outline)}, {"pieces", pieces}, {"symmetries", syms}, {"y", to_json(p.y)}});
  }
  json dis = json::array();
  for (const auto& patch : r.dissection) {
    json arr = json::array();
    for (const auto& t : patch) arr.push_back(to_json(t));
    dis.push_back(arr);
  }
  return {{"schema", kRuleSchema}, {"name", r.name},          {"mult", to_json(r.mult)},     {"lambda", r.lambda()},
          {"r0", r.r0_angle()},    {"group", r.group},        {"prototiles", protos},        {"dissection", dis}};
}

SubstitutionRule rule_from_json(const json& j) {
  expect_schema(j, kRuleSchema);
  SubstitutionRule r;
  r.name = j.at("name").get<std::string>();
  r.mult = gaussian_from_json(j.at("mult"));
  r.group = j.value("group", std::string());
  for (const auto& p : j.at("prototiles")) {
    Prototile t;
    t.index = p.at("index").get<int>();
    t.outline = polygon_from(p.at("outline"));
    for (const auto& piece : p.at("pieces")) t.pieces.push_back(polygon_from(piece));
    for (const auto& h : p.at("symmetries")) t.symmetries.push_back(motion_from_json(h));
    t.y = gaussian_from_json(p.at("y"));
    r.prototiles.push_back(std::move(t));
  }
  for (const auto& patch : j.at("dissection")) {
    std::vector<Tile> tiles;
    for (const auto& t : patch) tiles.push_back(tile_from_json(t));
    r.dissection.push_back(std::move(tiles));
  }
  verify_rule(r);
  return r;
}

// ---- results -------------------------------------------------------------------

json to_json(const PeriodSet& p) {
  json shifts = json::array();
  for (const auto& s : p.shifts) shifts.push_back(p.region.dim == 1 ? json(s.real()) : cplx_json(s));
  return {{"eps", p.eps},       {"mode", p.mode == PeriodMode::LR ? "LR" : "V"}, {"region", to_json(p.region)},
          {"tested", p.tested}, {"max_gap", num_or_null(p.max_gap)},          {"shifts", shifts}};
}

json to_json(const RadiusEstimate& r) {
  json out = {{"R_hat", num_or_null(r.r_hat)}, {"failed", r.failed}, {"pairs", r.pairs}};
  if (r.failed) out["witness"] = {{"pattern_center", cplx_json(r.witness)}, {"missing_from", cplx_json(r.witness_big)}};
  return out;
}

json to_json(const DensityCurve& c) {
  json rows = json::array();
  for (const auto& r : c.rows) rows.push_back({{"U", r.u}, {"f_minus", r.lower}, {"f_plus", r.upper}, {"samples", r.samples}});
  return {{"rows", rows}, {"limit", c.limit}};
}

// ---- text formats -----------------------------------------------------------------

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += csv_field(fields[i]);
    }
    out += "\r\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string density_csv(const DensityCurve& c) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : c.rows)
    rows.push_back({format_double(r.u), format_double(r.lower), format_double(r.upper), std::to_string(r.samples)});
  return csv_table({"U", "f_minus", "f_plus", "samples"}, rows);
}

void write_file_atomic(const std::string& path, std::string_view data) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw std::runtime_error("cannot rename onto " + path);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string git_blob_hash(std::string_view data) {
  std::string blob = "blob " + std::to_string(data.size());
  blob.push_back('\0');
  blob.append(data);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(blob.data(), blob.size(), md, &len, EVP_sha1(), nullptr) != 1) throw std::runtime_error("sha1 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

}  // namespace delone

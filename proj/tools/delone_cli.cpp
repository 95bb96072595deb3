// delone: command-line front end over the C interface.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "delone/delone.h"
#include "json.hpp"

using json = nlohmann::json;

namespace {

struct Failure {
  int code;
  std::string message;
};

void check(int status) {
  if (status != DELONE_OK) throw Failure{status, delone_last_error()};
}

struct StringDeleter {
  void operator()(char* s) const { delone_free_string(s); }
};
using CString = std::unique_ptr<char, StringDeleter>;

std::string take(char* s) {
  CString owned(s);
  return s ? std::string(s) : std::string();
}

struct PointSetDeleter {
  void operator()(delone_pointset* p) const { delone_pointset_free(p); }
};
struct RuleDeleter {
  void operator()(delone_rule* r) const { delone_rule_free(r); }
};
struct TilesDeleter {
  void operator()(delone_tiles* t) const { delone_tiles_free(t); }
};
using PointSet = std::unique_ptr<delone_pointset, PointSetDeleter>;
using Rule = std::unique_ptr<delone_rule, RuleDeleter>;
using Tiles = std::unique_ptr<delone_tiles, TilesDeleter>;

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{DELONE_EDOMAIN, "cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string hash_of(const std::string& data) {
  char* out = nullptr;
  check(delone_content_hash(data.data(), data.size(), &out));
  return take(out);
}

void write_text(const std::string& path, const std::string& data) {
  check(delone_write_file(path.c_str(), data.data(), data.size()));
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return json(v).dump();
}

/// State shared by every subcommand: the inputs read, the outputs written and
/// the result echoed into the report.
struct Run {
  std::uint64_t seed = 1;
  std::string report_path;
  bool timing = false;
  json inputs = json::object();
  json outputs = json::object();
  json result = json::object();

  std::string read_input(const std::string& path) {
    std::string data = read_text(path);
    inputs[path] = hash_of(data);
    return data;
  }

  /// Writes `data` to path, or stdout for "-" or an empty path.
  void emit(const std::string& path, const std::string& data) {
    if (path.empty() || path == "-") {
      std::cout << data;
      if (!data.empty() && data.back() != '\n') std::cout << '\n';
      return;
    }
    write_text(path, data);
    outputs[path] = hash_of(data);
  }
};

// ---- inputs ----------------------------------------------------------------------

struct SetOptions {
  std::string in;
  std::string set;
  int level = 6;
  int dim = 1;
  double window = 0.0;  // half-size, 0 means a default per set
  bool floating = false;
};

void add_set_options(CLI::App* app, SetOptions& s, bool with_level = true) {
  auto* in = app->add_option("--in", s.in, "point-set JSON");
  auto* set = app->add_option("--set", s.set, "generated set")
                  ->check(CLI::IsMember({"lattice", "twoadic", "twoadic-punctured", "bohr", "halfline", "pinwheel", "chair"}));
  in->excludes(set);
  if (with_level) app->add_option("--level", s.level, "supertile level for tilings")->check(CLI::Range(0, 14));
  app->add_option("--dim", s.dim, "dimension of the lattice")->check(CLI::Range(1, 2));
  app->add_option("--window", s.window, "half-size of the generated window")->check(CLI::PositiveNumber);
  app->add_flag("--float", s.floating, "floating coordinates for tilings");
}

json generator_for(const SetOptions& s) {
  if (s.set == "lattice") return {{"kind", "integer-lattice"}, {"dim", s.dim}};
  if (s.set == "twoadic") return {{"kind", "two-adic"}, {"dim", 1}};
  if (s.set == "twoadic-punctured") return {{"kind", "two-adic-punctured"}, {"dim", 1}};
  if (s.set == "bohr") return {{"kind", "bohr"}, {"dim", 1}, {"exact", false}};
  if (s.set == "halfline") return {{"kind", "half-line-defect"}, {"dim", 1}};
  return {{"kind", "decorated-tiling"}, {"dim", 2}, {"rule", s.set}, {"level", s.level}, {"exact", !s.floating}};
}

json window_for(const SetOptions& s, int dim) {
  double h = s.window;
  if (h <= 0) h = dim == 1 ? 4096.0 : 64.0;
  if (dim == 1) return {{"dim", 1}, {"lo", {-h}}, {"hi", {h}}};
  return {{"dim", 2}, {"lo", {-h, -h}}, {"hi", {h, h}}};
}

PointSet load_set(Run& run, const SetOptions& s) {
  delone_pointset* p = nullptr;
  if (!s.in.empty()) {
    check(delone_pointset_from_json(run.read_input(s.in).c_str(), &p));
  } else if (!s.set.empty()) {
    json gen = generator_for(s);
    const int dim = gen.at("dim").get<int>();
    check(delone_pointset_generate(gen.dump().c_str(), window_for(s, dim).dump().c_str(), &p));
  } else {
    throw Failure{DELONE_EUSAGE, "need --in or --set"};
  }
  return PointSet(p);
}

Rule load_rule(Run& run, const std::string& name) {
  delone_rule* r = nullptr;
  if (name == "pinwheel" || name == "chair")
    check(delone_rule_builtin(name.c_str(), &r));
  else
    check(delone_rule_from_json(run.read_input(name).c_str(), &r));
  return Rule(r);
}

Tiles load_tiles(Run& run, const std::string& path) {
  delone_tiles* t = nullptr;
  check(delone_tiles_from_json(run.read_input(path).c_str(), &t));
  return Tiles(t);
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Failure{DELONE_EUSAGE, std::string("bad number in ") + what + ": " + item};
    }
  }
  if (out.empty()) throw Failure{DELONE_EUSAGE, std::string("empty list for ") + what};
  return out;
}

std::pair<double, double> parse_point(const std::string& text) {
  auto v = parse_list(text, "point");
  if (v.size() > 2) throw Failure{DELONE_EUSAGE, "a point has at most two coordinates"};
  return {v[0], v.size() > 1 ? v[1] : 0.0};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delone sets: generation, metrics, substitution tilings, repetitivity and ergodic averages"};
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  Run run;
  app.add_option("--seed", run.seed, "seed for every random choice");
  app.add_option("--report", run.report_path, "write a JSON experiment report");
  app.add_flag("--timing", run.timing, "include the runtime in the report");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a point set or a supertile");
  SetOptions gen_set;
  std::string gen_out;
  bool gen_decorate = false;
  add_set_options(gen, gen_set);
  gen->add_flag("--decorate", gen_decorate, "decorate tiles into a point set");
  gen->add_option("--out", gen_out, "output file (default stdout)");

  // metric
  auto* metric = app.add_subcommand("metric", "distance between two point sets");
  std::string metric_kind, metric_a, metric_b, metric_center = "0,0";
  double metric_radius = 4.0, metric_step = 0.01;
  metric->add_option("kind", metric_kind, "lr, lm, v or wiggle")->required()->check(CLI::IsMember({"lr", "lm", "v", "wiggle"}));
  metric->add_option("--a", metric_a, "first point-set JSON")->required();
  metric->add_option("--b", metric_b, "second point-set JSON")->required();
  metric->add_option("--center", metric_center, "ball center x,y for v and wiggle");
  metric->add_option("--radius", metric_radius, "ball radius for v and wiggle")->check(CLI::NonNegativeNumber);
  metric->add_option("--step", metric_step, "angle grid step for wiggle")->check(CLI::PositiveNumber);

  // subst
  auto* subst = app.add_subcommand("subst", "substitution rules and supertiles");
  std::string subst_rule = "pinwheel", subst_out, subst_rule_out;
  int subst_level = 1, subst_type = 0, subst_order = 2;
  bool subst_check = false;
  subst->add_option("--rule", subst_rule, "pinwheel, chair or a rule JSON");
  subst->add_option("--level", subst_level, "substitution steps")->check(CLI::Range(0, 12));
  subst->add_option("--type", subst_type, "prototile index")->check(CLI::NonNegativeNumber);
  subst->add_option("--out", subst_out, "tiles JSON output");
  subst->add_option("--rule-out", subst_rule_out, "write the rule as JSON");
  subst->add_flag("--check", subst_check, "print the rule report");
  subst->add_option("--max-order", subst_order, "supertile order searched for orientation witnesses")
      ->check(CLI::Range(1, 4));

  // decorate
  auto* decorate = app.add_subcommand("decorate", "tiles to points and back");
  std::string dec_rule = "pinwheel", dec_tiles, dec_points, dec_out;
  decorate->add_option("--rule", dec_rule, "pinwheel, chair or a rule JSON");
  auto* dec_t = decorate->add_option("--tiles", dec_tiles, "tiles JSON to decorate");
  auto* dec_p = decorate->add_option("--undecorate", dec_points, "point-set JSON to decode");
  dec_t->excludes(dec_p);
  decorate->add_option("--out", dec_out, "output file (default stdout)");

  // repet
  auto* repet = app.add_subcommand("repet", "periods and repetitivity radii");
  repet->require_subcommand(1);
  SetOptions repet_set;
  std::string repet_r = "4", repet_eps = "0.1", repet_out, repet_mode = "LR", repet_center = "0,0";
  double repet_radius = 4.0, repet_step = 1.0, repet_sample = 0.0;
  std::int64_t repet_lo = -16, repet_hi = 16;
  std::size_t repet_rc = 32, repet_bc = 32;
  bool repet_wiggle = false;
  auto common_repet = [&](CLI::App* sub) {
    add_set_options(sub, repet_set);
    sub->add_option("--out", repet_out, "output file (default stdout)");
  };
  auto* period = repet->add_subcommand("period", "eps-periods on an integer grid");
  common_repet(period);
  period->add_option("--eps", repet_eps, "eps")->required();
  period->add_option("--mode", repet_mode, "LR or V")->check(CLI::IsMember({"LR", "V"}));
  period->add_option("--center", repet_center, "ball center for mode V");
  period->add_option("--radius", repet_radius, "ball radius for mode V")->check(CLI::PositiveNumber);
  period->add_option("--grid-lo", repet_lo, "smallest grid index");
  period->add_option("--grid-hi", repet_hi, "largest grid index");
  period->add_option("--grid-step", repet_step, "grid spacing")->check(CLI::PositiveNumber);
  auto sampling = [&](CLI::App* sub) {
    sub->add_option("--r-centers", repet_rc, "sampled r-patterns")->check(CLI::PositiveNumber);
    sub->add_option("--big-centers", repet_bc, "sampled R-pattern centers")->check(CLI::PositiveNumber);
    sub->add_option("--sample", repet_sample, "half-size of the sampling square")->check(CLI::PositiveNumber);
    sub->add_flag("--wiggle", repet_wiggle, "allow small rotations");
  };
  auto* radius = repet->add_subcommand("radius", "repetitivity radius for one r and eps");
  common_repet(radius);
  radius->add_option("--r", repet_r, "pattern radius")->required();
  radius->add_option("--eps", repet_eps, "eps")->required();
  sampling(radius);
  auto* curve = repet->add_subcommand("curve", "repetitivity radius over r and eps lists");
  common_repet(curve);
  curve->add_option("--r", repet_r, "comma-separated radii")->required();
  curve->add_option("--eps", repet_eps, "comma-separated eps values")->required();
  sampling(curve);

  // ergodic
  auto* ergodic = app.add_subcommand("ergodic", "density bounds and Birkhoff averages");
  SetOptions erg_set;
  std::string erg_u = "8,16,32", erg_out, erg_angles;
  std::size_t erg_samples = 32;
  double erg_w = 1.0, erg_bump = 1.0, erg_birkhoff = 0.0;
  add_set_options(ergodic, erg_set);
  ergodic->add_option("--U", erg_u, "comma-separated box scales");
  ergodic->add_option("--samples", erg_samples, "boxes per scale")->check(CLI::PositiveNumber);
  ergodic->add_option("--weight-window", erg_w, "plateau radius of the weight")->check(CLI::PositiveNumber);
  ergodic->add_option("--bump", erg_bump, "width of the weight's falloff")->check(CLI::PositiveNumber);
  ergodic->add_option("--birkhoff", erg_birkhoff, "also print J_n for this n")->check(CLI::PositiveNumber);
  ergodic->add_option("--angles", erg_angles, "comma-separated angles averaged in J_n");
  ergodic->add_option("--out", erg_out, "density CSV output (default stdout)");

  // render
  auto* render = app.add_subcommand("render", "SVG of a point set or a tiling");
  std::string render_in, render_tiles, render_rule = "pinwheel", render_out;
  double render_width = 800.0;
  auto* r_in = render->add_option("--in", render_in, "point-set JSON");
  auto* r_tiles = render->add_option("--tiles", render_tiles, "tiles JSON");
  r_in->excludes(r_tiles);
  render->add_option("--rule", render_rule, "rule for --tiles");
  render->add_option("--width", render_width, "pixels")->check(CLI::PositiveNumber);
  render->add_option("--out", render_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  const auto started = std::chrono::steady_clock::now();
  try {
    if (*gen) {
      std::string text;
      const bool tiling = gen_set.set == "pinwheel" || gen_set.set == "chair";
      if (tiling && gen_set.in.empty() && (!gen_decorate || gen_set.window <= 0)) {
        Rule rule = load_rule(run, gen_set.set);
        delone_tiles* t = nullptr;
        check(delone_tiles_supertile(rule.get(), 0, gen_set.level, &t));
        Tiles tiles(t);
        if (gen_decorate) {
          delone_pointset* p = nullptr;
          check(delone_decorate(rule.get(), tiles.get(), &p));
          PointSet ps(p);
          char* s = nullptr;
          check(delone_pointset_to_json(ps.get(), &s));
          text = take(s);
        } else {
          char* s = nullptr;
          check(delone_tiles_to_json(rule.get(), tiles.get(), &s));
          text = take(s);
        }
      } else {
        if (gen_decorate && !tiling) throw Failure{DELONE_EUSAGE, "--decorate needs a tiling set"};
        PointSet ps = load_set(run, gen_set);
        char* s = nullptr;
        check(delone_pointset_to_json(ps.get(), &s));
        text = take(s);
      }
      run.emit(gen_out, text);
    } else if (*metric) {
      delone_pointset *a = nullptr, *b = nullptr;
      check(delone_pointset_from_json(run.read_input(metric_a).c_str(), &a));
      PointSet pa(a);
      check(delone_pointset_from_json(run.read_input(metric_b).c_str(), &b));
      PointSet pb(b);
      auto [cx, cy] = parse_point(metric_center);
      std::string line;
      if (metric_kind == "lr") {
        double v = 0;
        int limited = 0;
        check(delone_metric_lr(pa.get(), pb.get(), &v, &limited));
        run.result = {{"d_LR", v}, {"window_limited", limited != 0}};
        line = format_number(v) + (limited ? " (upper bound: windows too small)" : "");
      } else if (metric_kind == "lm") {
        double lo = 0, hi = 0;
        int cert = 0;
        check(delone_metric_lm(pa.get(), pb.get(), &lo, &hi, &cert));
        run.result = {{"lower", lo}, {"upper", hi}, {"certified", cert != 0}};
        line = format_number(lo) + " " + format_number(hi);
      } else if (metric_kind == "v") {
        double v = 0;
        check(delone_metric_v(pa.get(), pb.get(), cx, cy, metric_radius, &v));
        run.result = {{"d_V", std::isfinite(v) ? json(v) : json(nullptr)}};
        line = format_number(v);
      } else {
        double up = 0, lo = 0, th = 0, th2 = 0;
        check(delone_metric_wiggle(pa.get(), pb.get(), cx, cy, metric_radius, metric_step, &up, &lo, &th, &th2));
        run.result = {{"upper", up}, {"lower", lo}, {"theta", th}, {"theta_prime", th2}};
        line = format_number(lo) + " " + format_number(up);
      }
      std::cout << line << "\n";
    } else if (*subst) {
      Rule rule = load_rule(run, subst_rule);
      if (!subst_rule_out.empty()) {
        char* s = nullptr;
        check(delone_rule_to_json(rule.get(), &s));
        run.emit(subst_rule_out, take(s));
      }
      if (subst_check) {
        char* s = nullptr;
        check(delone_rule_report(rule.get(), subst_order, &s));
        std::string rep = take(s);
        run.result = json::parse(rep);
        std::cout << run.result.dump(2) << "\n";
      }
      if (!subst_out.empty() || (!subst_check && subst_rule_out.empty())) {
        delone_tiles* t = nullptr;
        check(delone_tiles_supertile(rule.get(), subst_type, subst_level, &t));
        Tiles tiles(t);
        char* s = nullptr;
        check(delone_tiles_to_json(rule.get(), tiles.get(), &s));
        size_t n = 0;
        check(delone_tiles_count(tiles.get(), &n));
        run.result["tiles"] = n;
        run.emit(subst_out, take(s));
      }
    } else if (*decorate) {
      Rule rule = load_rule(run, dec_rule);
      char* s = nullptr;
      if (!dec_tiles.empty()) {
        Tiles tiles = load_tiles(run, dec_tiles);
        delone_pointset* p = nullptr;
        check(delone_decorate(rule.get(), tiles.get(), &p));
        PointSet ps(p);
        check(delone_pointset_to_json(ps.get(), &s));
      } else if (!dec_points.empty()) {
        delone_pointset* p = nullptr;
        check(delone_pointset_from_json(run.read_input(dec_points).c_str(), &p));
        PointSet ps(p);
        delone_tiles* t = nullptr;
        check(delone_undecorate(rule.get(), ps.get(), &t));
        Tiles tiles(t);
        check(delone_tiles_to_json(rule.get(), tiles.get(), &s));
      } else {
        throw Failure{DELONE_EUSAGE, "need --tiles or --undecorate"};
      }
      run.emit(dec_out, take(s));
    } else if (*repet) {
      PointSet ps = load_set(run, repet_set);
      json opts = {{"r_centers", repet_rc}, {"big_centers", repet_bc}, {"seed", run.seed}, {"wiggle", repet_wiggle}};
      if (repet_sample > 0) {
        int dim = 1;
        check(delone_pointset_dim(ps.get(), &dim));
        opts["sample_region"] = dim == 1 ? json{{"dim", 1}, {"lo", {-repet_sample}}, {"hi", {repet_sample}}}
                                         : json{{"dim", 2},
                                                {"lo", {-repet_sample, -repet_sample}},
                                                {"hi", {repet_sample, repet_sample}}};
      }
      if (*period) {
        auto eps = parse_list(repet_eps, "--eps");
        if (eps.size() != 1) throw Failure{DELONE_EUSAGE, "period takes one eps"};
        json cfg = {{"eps", eps[0]},
                    {"mode", repet_mode},
                    {"grid", {{"lo", repet_lo}, {"hi", repet_hi}, {"step", repet_step}}}};
        if (repet_mode == "V") {
          auto [cx, cy] = parse_point(repet_center);
          cfg["ball"] = {{"center", {cx, cy}}, {"radius", repet_radius}};
        }
        char* s = nullptr;
        check(delone_repet_period(ps.get(), cfg.dump().c_str(), &s));
        run.result = json::parse(take(s));
        run.emit(repet_out, run.result.dump(2));
      } else if (*radius) {
        auto r = parse_list(repet_r, "--r");
        auto eps = parse_list(repet_eps, "--eps");
        if (r.size() != 1 || eps.size() != 1) throw Failure{DELONE_EUSAGE, "radius takes one r and one eps"};
        char* s = nullptr;
        check(delone_repet_radius(ps.get(), r[0], eps[0], opts.dump().c_str(), &s));
        run.result = json::parse(take(s));
        run.emit(repet_out, run.result.dump(2));
      } else {
        auto r = parse_list(repet_r, "--r");
        auto eps = parse_list(repet_eps, "--eps");
        char *js = nullptr, *csv = nullptr;
        check(delone_repet_curve(ps.get(), r.data(), r.size(), eps.data(), eps.size(), opts.dump().c_str(), &js, &csv));
        run.result = json::parse(take(js));
        run.emit(repet_out, take(csv));
      }
    } else if (*ergodic) {
      PointSet ps = load_set(run, erg_set);
      auto us = parse_list(erg_u, "--U");
      json weight = {{"kind", "smoothed-count"}, {"window", erg_w}, {"bump", erg_bump}};
      char *js = nullptr, *csv = nullptr;
      check(delone_ergodic_density(ps.get(), weight.dump().c_str(), us.data(), us.size(), erg_samples, run.seed, &js, &csv));
      run.result = json::parse(take(js));
      if (erg_birkhoff > 0) {
        std::vector<double> angles;
        if (!erg_angles.empty()) angles = parse_list(erg_angles, "--angles");
        double j = 0;
        check(delone_ergodic_birkhoff(ps.get(), weight.dump().c_str(), erg_birkhoff, angles.data(), angles.size(), &j));
        run.result["J"] = j;
        std::cerr << "J_" << format_number(erg_birkhoff) << " = " << format_number(j) << "\n";
      }
      run.emit(erg_out, take(csv));
    } else if (*render) {
      json style = {{"width", render_width}};
      char* s = nullptr;
      if (!render_tiles.empty()) {
        Rule rule = load_rule(run, render_rule);
        Tiles tiles = load_tiles(run, render_tiles);
        check(delone_render_tiles_svg(rule.get(), tiles.get(), style.dump().c_str(), &s));
      } else if (!render_in.empty()) {
        delone_pointset* p = nullptr;
        check(delone_pointset_from_json(run.read_input(render_in).c_str(), &p));
        PointSet ps(p);
        check(delone_render_pointset_svg(ps.get(), style.dump().c_str(), &s));
      } else {
        throw Failure{DELONE_EUSAGE, "need --in or --tiles"};
      }
      run.emit(render_out, take(s));
    }

    if (!run.report_path.empty()) {
      // canonical echo of every option value, independent of flag order
      json args = json::array();
      std::string path;
      for (const CLI::App* a = &app; !a->get_subcommands().empty();) {
        a = a->get_subcommands().front();
        path += a->get_name() + ".";
      }
      std::stringstream cfg(app.config_to_str(true, false));
      for (std::string line; std::getline(cfg, line);) {
        if (line.empty() || line.rfind("report", 0) == 0) continue;
        const auto eq = line.find('=');
        const auto dot = line.rfind('.', eq);
        if (dot == std::string::npos || line.compare(0, dot + 1, path) == 0) args.push_back(line);
      }
      json report = {{"schema", "delone.report/1"},
                     {"version", delone_version()},
                     {"config", args},
                     {"seed", run.seed},
                     {"inputs", run.inputs},
                     {"outputs", run.outputs},
                     {"result", run.result}};
      if (run.timing) {
        std::chrono::duration<double> dt = std::chrono::steady_clock::now() - started;
        report["runtime_seconds"] = dt.count();
      }
      write_text(run.report_path, report.dump(2) + "\n");
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    if (f.code == DELONE_EUSAGE) std::cerr << "\n" << app.help();
    return f.code == DELONE_EUSAGE ? 2 : 1;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

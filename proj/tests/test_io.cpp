#include "doctest.h"

#include <unistd.h>

#include <filesystem>
#include <regex>

#include "delone/io.hpp"
#include "delone/render.hpp"
#include "support.hpp"

using namespace delone;
using testing::Rng;

namespace {

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto at = s.find(needle); at != std::string::npos; at = s.find(needle, at + 1)) ++n;
  return n;
}

std::filesystem::path scratch_dir() {
  auto d = std::filesystem::temp_directory_path() / ("delone_io_test_" + std::to_string(::getpid()));
  std::filesystem::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("exact scalars serialize as integer tuples") {
  CHECK(to_json(Gaussian::rational(3, 4)) == json::array({3, 4}));
  CHECK(to_json(Gaussian(1, -2, 5)) == json::array({1, -2, 5}));
  CHECK(gaussian_from_json(json(7)) == Gaussian(7));
  CHECK(gaussian_from_json(json::array({-5, 10})) == Gaussian::rational(-1, 2));
  // ring form (p + q i) i^j / (2 + i)^k
  CHECK(gaussian_from_json(json::array({2, -1, 1, 0})) == Gaussian(2, -1) / Gaussian(2, 1));
  CHECK(gaussian_from_json(json::array({1, 0, 0, 3})) == Gaussian(0, -1));
  CHECK_THROWS(gaussian_from_json(json("0.5")));
  CHECK_THROWS(gaussian_from_json(json::array({1, 0})));
  Rng rng(81);
  for (int trial = 0; trial < 500; ++trial) {
    Gaussian g = rng.gaussian(1000, rng.integer(1, 5000));
    json j = to_json(g);
    for (const auto& part : j) CHECK(part.is_number_integer());
    CHECK(gaussian_from_json(j) == g);
    ExactMotion m = rng.motion(9, 7, 3);
    CHECK(motion_from_json(to_json(m)) == m);
  }
}

TEST_CASE("point sets round-trip") {
  std::vector<PointSetWindow> sets = {
      realize(GeneratorSpec::two_adic(), Box::interval(-30, 30)),
      realize(GeneratorSpec::bohr_golden(), Box::interval(-30, 30)),
      realize(GeneratorSpec::lattice(2), Box::centered(2, 4)),
      realize(GeneratorSpec::decorated("pinwheel", 5), Box::centered(2, 8)),
      realize(GeneratorSpec::decorated("chair", 5, false), Box::centered(2, 8)),
      realize(GeneratorSpec::half_line_defect(), Box::interval(-5, 5)),
  };
  sets.push_back(sets[0].transformed(ExactMotion::translation(Gaussian::rational(1, 3))));
  sets.push_back(sets[2].to_floating().transformed(FloatMotion{{0.25, -1.5}, std::polar(1.0, 0.3), true}));
  for (const auto& p : sets) {
    json j = to_json(p);
    CHECK(j["schema"] == kPointSetSchema);
    auto back = pointset_from_json(json::parse(j.dump()));
    CHECK(same_pointset(p, back));
    CHECK(back.is_exact() == p.is_exact());
    CHECK(to_json(back).dump() == j.dump());
  }
  CHECK_FALSE(same_pointset(sets[0], sets[6]));
  json bad = to_json(sets[0]);
  bad["schema"] = "delone.pointset/99";
  CHECK_THROWS(pointset_from_json(bad));
}

TEST_CASE("tiles, rules and results round-trip") {
  for (const auto* name : {"pinwheel", "chair"}) {
    auto rule = builtin_rule(name);
    auto back = rule_from_json(json::parse(to_json(rule).dump()));
    CHECK(to_json(back) == to_json(rule));
    auto tiles = supertile(rule, 0, 2).leaves();
    std::string got_rule;
    auto tb = tiles_from_json(json::parse(tiles_to_json(name, tiles).dump()), &got_rule);
    CHECK(got_rule == name);
    CHECK(tb == tiles);
  }
  auto broken = to_json(builtin_rule("pinwheel"));
  broken["dissection"][0].erase(0);
  CHECK_THROWS(rule_from_json(broken));

  RadiusEstimate est;
  est.r_hat = kInfinity;
  est.failed = true;
  CHECK(to_json(est)["R_hat"].is_null());
  PeriodSet ps;
  CHECK(to_json(ps)["max_gap"].is_null());
}

TEST_CASE("csv quoting and number formatting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  CHECK(csv_table({"x", "y"}, {{"1", "a,b"}}) == "x,y\r\n1,\"a,b\"\r\n");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(kInfinity) == "inf");
  Rng rng(82);
  for (int k = 0; k < 200; ++k) {
    double v = rng.uniform(-1e6, 1e6) * std::pow(10.0, static_cast<double>(rng.integer(-20, 5)));
    CHECK(std::stod(format_double(v)) == v);
  }
  DensityCurve c;
  c.rows.push_back({4, 0.5, 1.5, 10});
  CHECK(density_csv(c).rfind("U,f_minus,f_plus,samples\r\n4,0.5,1.5,10\r\n", 0) == 0);
}

TEST_CASE("git blob hashes") {
  CHECK(git_blob_hash("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  CHECK(git_blob_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST_CASE("atomic writes replace the file whole") {
  auto dir = scratch_dir();
  const std::string path = (dir / "out.json").string();
  write_file_atomic(path, "first");
  CHECK(read_file(path) == "first");
  write_file_atomic(path, "second, longer");
  CHECK(read_file(path) == "second, longer");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++files;
  CHECK(files == 1);
  CHECK_THROWS(write_file_atomic((dir / "missing" / "x").string(), "x"));
  CHECK_THROWS(read_file((dir / "nope").string()));
  std::filesystem::remove_all(dir);
}

TEST_CASE("svg rendering") {
  auto rule = builtin_rule("pinwheel");
  auto tiles = supertile(rule, 0, 2).leaves();
  auto svg = render_tiles_svg(rule, tiles);
  CHECK(count(svg, "<polygon") == 25);
  CHECK(svg == render_tiles_svg(rule, tiles));
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\"") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);

  auto empty = render_points_svg(PointSetWindow(2, std::vector<cplx>{}, Box::centered(2, 1), 0.0));
  CHECK(empty.find("<svg") != std::string::npos);
  CHECK(empty.find("</svg>") != std::string::npos);
  CHECK(count(empty, "<circle") == 0);
  CHECK(render_tiles_svg(rule, {}).find("</svg>") != std::string::npos);

  auto pts = realize(GeneratorSpec::decorated("chair", 4), Box::centered(2, 6));
  auto psvg = render_points_svg(pts);
  CHECK(count(psvg, "<circle") == pts.size());
  CHECK(psvg == render_points_svg(pts));
  // half the discreteness radius, at least half a pixel
  std::smatch m;
  REQUIRE(std::regex_search(psvg, m, std::regex("r=\"([0-9.]+)\"")));
  CHECK(std::stod(m[1].str()) == doctest::Approx(std::max(pts.radius() / 2 * 800.0 / 12.0, 0.5)).epsilon(1e-3));

  auto line = render_points_svg(realize(GeneratorSpec::lattice(1), Box::interval(0, 5)));
  CHECK(count(line, "<circle") == 6);
  CHECK(line.find("<line") != std::string::npos);

  // orientation buckets cover the circle
  CHECK(orientation_bucket(ExactMotion::identity(), 8) == 0);
  CHECK(orientation_bucket(ExactMotion{Gaussian(0), Gaussian(-1), false}, 8) == 4);
  CHECK(orientation_bucket(ExactMotion{Gaussian(0), Gaussian(0, -1), false}, 8) == 6);
}

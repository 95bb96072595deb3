#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <string>

#include "delone/delone.h"

namespace {

/// Takes ownership of a returned string.
std::string take(char* s) {
  REQUIRE(s != nullptr);
  std::string out(s);
  delone_free_string(s);
  return out;
}

delone_pointset* make(const char* gen, const char* window) {
  delone_pointset* p = nullptr;
  REQUIRE(delone_pointset_generate(gen, window, &p) == DELONE_OK);
  return p;
}

const char* kTwoAdic = R"({"kind": "two-adic", "dim": 1})";
const char* kWin1 = R"({"dim": 1, "lo": [-400], "hi": [400]})";

}  // namespace

TEST_CASE("point set handles") {
  delone_pointset* p = make(kTwoAdic, R"({"dim": 1, "lo": [-1], "hi": [2]})");
  size_t n = 0;
  int dim = 0;
  CHECK(delone_pointset_size(p, &n) == DELONE_OK);
  CHECK(n == 3);
  CHECK(delone_pointset_dim(p, &dim) == DELONE_OK);
  CHECK(dim == 1);
  char* js = nullptr;
  REQUIRE(delone_pointset_to_json(p, &js) == DELONE_OK);
  const std::string text = take(js);
  CHECK(text.find("\"points\"") != std::string::npos);
  delone_pointset* q = nullptr;
  REQUIRE(delone_pointset_from_json(text.c_str(), &q) == DELONE_OK);
  char* js2 = nullptr;
  REQUIRE(delone_pointset_to_json(q, &js2) == DELONE_OK);
  CHECK(take(js2) == text);
  delone_pointset_free(q);
  delone_pointset_free(p);
  delone_pointset_free(nullptr);
}

TEST_CASE("status codes and error messages") {
  delone_pointset* p = nullptr;
  CHECK(delone_pointset_generate("{not json", kWin1, &p) == DELONE_EUSAGE);
  CHECK(std::string(delone_last_error()).size() > 0);
  CHECK(delone_pointset_generate(R"({"kind": "penrose"})", kWin1, &p) == DELONE_EUSAGE);
  CHECK(p == nullptr);
  CHECK(delone_pointset_generate(kTwoAdic, kWin1, nullptr) == DELONE_EUSAGE);
  delone_rule* r = nullptr;
  CHECK(delone_rule_builtin("penrose", &r) == DELONE_EUSAGE);
  // a window outside the supertile is a domain failure
  CHECK(delone_pointset_generate(R"({"kind": "decorated-tiling", "dim": 2, "rule": "pinwheel", "level": 1})",
                                 R"({"dim": 2, "lo": [-500, -500], "hi": [500, 500]})", &p) == DELONE_EDOMAIN);
  CHECK(delone_version() != nullptr);
}

TEST_CASE("metrics through the C interface") {
  delone_pointset* z = make(R"({"kind": "integer-lattice", "dim": 1})", R"({"dim": 1, "lo": [-40], "hi": [40]})");
  delone_pointset* s = nullptr;
  REQUIRE(delone_pointset_translate(z, 0.1, 0.0, &s) == DELONE_OK);
  double v = -1;
  int limited = -1;
  CHECK(delone_metric_lr(z, z, &v, &limited) == DELONE_OK);
  CHECK(v == 0.0);
  CHECK(delone_metric_lr(z, s, &v, &limited) == DELONE_OK);
  CHECK(v == doctest::Approx(0.1).epsilon(1e-6));
  double lo = 0, hi = 0;
  int cert = -1;
  CHECK(delone_metric_lm(z, s, &lo, &hi, &cert) == DELONE_OK);
  CHECK(hi == doctest::Approx(0.1));
  CHECK(delone_metric_v(z, s, 0.0, 0.0, 5.0, &v) == DELONE_OK);
  CHECK(v == doctest::Approx(0.1));
  double up, low, th, thp;
  CHECK(delone_metric_wiggle(z, s, 0, 0, 5, 0.01, &up, &low, &th, &thp) == DELONE_EUSAGE);
  delone_pointset_free(s);
  delone_pointset_free(z);
}

TEST_CASE("rules, tiles and decoration") {
  delone_rule* r = nullptr;
  REQUIRE(delone_rule_builtin("pinwheel", &r) == DELONE_OK);
  delone_tiles* t = nullptr;
  REQUIRE(delone_tiles_supertile(r, 0, 2, &t) == DELONE_OK);
  size_t n = 0;
  CHECK(delone_tiles_count(t, &n) == DELONE_OK);
  CHECK(n == 25);
  delone_tiles* t3 = nullptr;
  REQUIRE(delone_tiles_substitute(r, t, 1, &t3) == DELONE_OK);
  CHECK(delone_tiles_count(t3, &n) == DELONE_OK);
  CHECK(n == 125);
  char* rep = nullptr;
  REQUIRE(delone_rule_report(r, 2, &rep) == DELONE_OK);
  const std::string report = take(rep);
  CHECK(report.find("certified-irrational") != std::string::npos);
  CHECK(report.find("\"primitive\":true") != std::string::npos);

  delone_pointset* p = nullptr;
  REQUIRE(delone_decorate(r, t, &p) == DELONE_OK);
  CHECK(delone_pointset_size(p, &n) == DELONE_OK);
  CHECK(n == 100);
  delone_tiles* back = nullptr;
  REQUIRE(delone_undecorate(r, p, &back) == DELONE_OK);
  CHECK(delone_tiles_count(back, &n) == DELONE_OK);
  CHECK(n == 25);

  char* tj = nullptr;
  REQUIRE(delone_tiles_to_json(r, t, &tj) == DELONE_OK);
  delone_tiles* parsed = nullptr;
  const std::string tiles_text = take(tj);
  REQUIRE(delone_tiles_from_json(tiles_text.c_str(), &parsed) == DELONE_OK);
  char* tj2 = nullptr;
  REQUIRE(delone_tiles_to_json(r, parsed, &tj2) == DELONE_OK);
  CHECK(take(tj2) == tiles_text);

  char* rj = nullptr;
  REQUIRE(delone_rule_to_json(r, &rj) == DELONE_OK);
  delone_rule* r2 = nullptr;
  CHECK(delone_rule_from_json(take(rj).c_str(), &r2) == DELONE_OK);

  char* svg = nullptr;
  REQUIRE(delone_render_tiles_svg(r2, t, "{}", &svg) == DELONE_OK);
  const std::string s = take(svg);
  std::size_t polys = 0;
  for (auto at = s.find("<polygon"); at != std::string::npos; at = s.find("<polygon", at + 1)) ++polys;
  CHECK(polys == 25);

  delone_tiles_free(parsed);
  delone_tiles_free(back);
  delone_pointset_free(p);
  delone_tiles_free(t3);
  delone_tiles_free(t);
  delone_rule_free(r2);
  delone_rule_free(r);
}

TEST_CASE("repetitivity and ergodic calls") {
  delone_pointset* p = make(kTwoAdic, kWin1);
  char* out = nullptr;
  REQUIRE(delone_repet_period(p, R"({"eps": 0.3, "mode": "V", "ball": {"center": [0, 0], "radius": 20},
                                     "grid": {"lo": -32, "hi": 32, "step": 1}, "region": {"dim": 1, "lo": [-30], "hi": [30]}})",
                              &out) == DELONE_OK);
  CHECK(take(out).find("\"max_gap\"") != std::string::npos);
  REQUIRE(delone_repet_radius(p, 4.0, 0.125, R"({"seed": 3, "r_centers": 8, "big_centers": 8})", &out) == DELONE_OK);
  CHECK(take(out).find("\"failed\":false") != std::string::npos);
  const double rs[] = {2, 4, 8};
  const double es[] = {0.1};
  char* csv = nullptr;
  REQUIRE(delone_repet_curve(p, rs, 3, es, 1, R"({"seed": 1, "r_centers": 8, "big_centers": 8})", &out, &csv) == DELONE_OK);
  take(out);
  CHECK(take(csv).rfind("r,eps,R_hat,samples,linear", 0) == 0);

  const double us[] = {4, 16};
  REQUIRE(delone_ergodic_density(p, R"({"kind": "smoothed-count", "window": 0.5, "bump": 0.5})", us, 2, 10, 7, &out,
                                 &csv) == DELONE_OK);
  take(out);
  CHECK(take(csv).rfind("U,f_minus,f_plus,samples", 0) == 0);
  double v = 0;
  CHECK(delone_ergodic_birkhoff(p, R"({"kind": "constant", "constant": 2})", 10, nullptr, 0, &v) == DELONE_OK);
  CHECK(v == doctest::Approx(2.0));
  REQUIRE(delone_ergodic_decompose(R"({"dim": 2, "lo": [0, 0], "hi": [10, 10]})", "2", "5", &out) == DELONE_OK);
  CHECK(take(out).find("[10,3]") != std::string::npos);
  delone_pointset_free(p);
}

TEST_CASE("hash and file output") {
  char* h = nullptr;
  REQUIRE(delone_content_hash("hello\n", 6, &h) == DELONE_OK);
  CHECK(take(h) == "ce013625030ba8dba906f756967f9e9ca394464a");
  CHECK(delone_write_file("/nonexistent-dir/x", "a", 1) != DELONE_OK);
}

#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Sandbox {
  fs::path dir;
  Sandbox() {
    dir = fs::temp_directory_path() / ("delone_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Sandbox() { fs::remove_all(dir); }

  std::string path(const std::string& name) const { return (dir / name).string(); }

  /// Runs the CLI with args, stdout and stderr to files; returns the exit code.
  int run(const std::string& args) const {
    const std::string cmd = "cd '" + dir.string() + "' && '" DELONE_CLI_PATH "' " + args + " >stdout.txt 2>stderr.txt";
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
  }

  std::string read(const std::string& name) const {
    std::ifstream in(path(name), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
};

}  // namespace

TEST_CASE("exit codes") {
  Sandbox sb;
  CHECK(sb.run("gen --set lattice --window 3") == 0);
  CHECK(sb.read("stdout.txt").find("\"points\"") != std::string::npos);

  CHECK(sb.run("gen --set lattice --no-such-flag") == 2);
  CHECK(sb.read("stderr.txt").find("Usage") != std::string::npos);
  CHECK(sb.read("stdout.txt").empty());
  CHECK(sb.run("frobnicate") == 2);
  CHECK(sb.run("") == 2);
  CHECK(sb.run("repet curve --set twoadic --r 2,x --eps 0.1") == 2);

  // a window larger than the supertile is a domain error
  CHECK(sb.run("gen --set pinwheel --level 1 --window 500 --decorate") == 1);
  CHECK(sb.read("stderr.txt").find("error:") != std::string::npos);
  CHECK(sb.run("metric lr --a missing.json --b missing.json") == 1);
}

TEST_CASE("documented example commands") {
  Sandbox sb;
  REQUIRE(sb.run("gen --set pinwheel --level 4 --decorate --out ps.json") == 0);
  json ps = json::parse(sb.read("ps.json"));
  CHECK(ps["schema"] == "delone.pointset/1");
  CHECK(ps["points"].size() == 4 * 625);

  REQUIRE(sb.run("gen --set lattice --window 40 --out a.json") == 0);
  REQUIRE(sb.run("gen --set twoadic --window 40 --out b.json") == 0);
  REQUIRE(sb.run("metric lr --a a.json --b b.json") == 0);
  const double d = std::stod(sb.read("stdout.txt"));
  CHECK(d == doctest::Approx(0.5).epsilon(1e-6));
  REQUIRE(sb.run("metric lr --a a.json --b a.json") == 0);
  CHECK(std::stod(sb.read("stdout.txt")) == 0.0);

  REQUIRE(sb.run("repet curve --set twoadic --r 2,4,8,16 --eps 0.1,0.05 --out curve.csv") == 0);
  const std::string csv = sb.read("curve.csv");
  CHECK(csv.rfind("r,eps,R_hat,samples,linear\r\n", 0) == 0);
  std::size_t rows = 0, linear = 0;
  for (auto at = csv.find("\r\n"); at != std::string::npos; at = csv.find("\r\n", at + 1)) ++rows;
  for (auto at = csv.find(",true\r\n"); at != std::string::npos; at = csv.find(",true\r\n", at + 1)) ++linear;
  CHECK(rows == 9);
  CHECK(linear == 8);
}

TEST_CASE("tiles and points round-trip through the command line") {
  Sandbox sb;
  REQUIRE(sb.run("subst --rule pinwheel --level 2 --out t.json") == 0);
  REQUIRE(sb.run("decorate --rule pinwheel --tiles t.json --out p.json") == 0);
  REQUIRE(sb.run("decorate --rule pinwheel --undecorate p.json --out back.json") == 0);
  CHECK(json::parse(sb.read("back.json"))["tiles"].size() == 25);
  REQUIRE(sb.run("render --tiles t.json --rule pinwheel --out t.svg") == 0);
  const std::string svg = sb.read("t.svg");
  std::size_t polys = 0;
  for (auto at = svg.find("<polygon"); at != std::string::npos; at = svg.find("<polygon", at + 1)) ++polys;
  CHECK(polys == 25);
  REQUIRE(sb.run("subst --rule pinwheel --check --max-order 2") == 0);
  CHECK(json::parse(sb.read("stdout.txt"))["dto"]["verdict"] == "certified-irrational");
  REQUIRE(sb.run("subst --rule chair --check") == 0);
  CHECK(json::parse(sb.read("stdout.txt"))["dto"]["verdict"] == "none-found");
}

TEST_CASE("reports reproduce under a fixed seed") {
  Sandbox sb;
  const std::string cmd = "repet radius --set twoadic --window 600 --sample 200 --r 4 --eps 0.1 --out r.json";
  REQUIRE(sb.run("--seed 17 --report one.json " + cmd) == 0);
  REQUIRE(sb.run("--seed 17 --report two.json " + cmd) == 0);
  CHECK(sb.read("one.json") == sb.read("two.json"));
  json rep = json::parse(sb.read("one.json"));
  CHECK(rep["seed"] == 17);
  CHECK(rep["outputs"].contains("r.json"));
  CHECK(rep["outputs"]["r.json"].get<std::string>().size() == 40);

  REQUIRE(sb.run("--seed 18 --report three.json " + cmd) == 0);
  CHECK(sb.read("one.json") != sb.read("three.json"));

  const std::string erg = "ergodic --set bohr --window 400 --U 4,8,16 --samples 16 --birkhoff 32 --out d.csv";
  REQUIRE(sb.run("--seed 5 --report e1.json " + erg) == 0);
  REQUIRE(sb.run("--seed 5 --report e2.json " + erg) == 0);
  CHECK(sb.read("e1.json") == sb.read("e2.json"));
}

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <tuple>
#include <unistd.h>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "rotorlab/cli/commands.hpp"
#include "rotorlab/cli/config.hpp"
#include "rotorlab/cli/format.hpp"
#include "rotorlab/errors.hpp"
#include "support.hpp"

using namespace rotorlab;
using namespace rotorlab::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "rotorlab");
  std::vector<char*> argv;
  for (std::string& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("rotorlab_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch_dir() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::vector<double> column(const std::string& text, std::size_t c) {
  std::vector<double> v;
  for (const auto& r : csv_rows(text)) v.push_back(std::stod(r.at(c)));
  return v;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("shortest round-trip number formatting") {
    for (int i = 0; i < 1000; ++i) {
      const double x = std::ldexp(test::uniform(-1, 1), static_cast<int>(test::uniform(-60, 60)));
      CHECK(std::stod(format_double(x)) == x);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(2.0) == "2");
    CHECK(format_double(1e-300) == "1e-300");
    CHECK(csv_row({1.5, -2.0}) == "1.5,-2");
  }

  TEST_CASE("strict configuration parsing") {
    CHECK_NOTHROW(parse_config(Json::object()));
    CHECK_THROWS_AS(parse_config(Json::parse(R"({"manifold":{"kind":"sphere","radius":1}})")), ConfigError);
    CHECK_THROWS_AS(parse_config(Json::parse(R"({"bogus":1})")), ConfigError);
    CHECK_THROWS_AS(parse_config(Json::parse(R"({"rotor":{"M":"heavy"}})")), ConfigError);
    try {
      parse_config(Json::parse(R"({"grid":{"nn":3}})"));
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("grid.nn") != std::string::npos);
    }
  }

  TEST_CASE("validation") {
    auto valid = [](const char* text) {
      RunConfig c = parse_config(Json::parse(text));
      validate(c);
      return c;
    };
    CHECK_THROWS_AS(valid(R"({"manifold":{"R":-1}})"), ConfigError);
    CHECK_THROWS_AS(valid(R"({"manifold":{"kind":"cube"}})"), ConfigError);
    CHECK_THROWS_AS(valid(R"({"rotor":{"sig":-1}})"), ConfigError);
    CHECK_THROWS_AS(valid(R"({"grid":{"n":8}})"), ConfigError);
    CHECK_THROWS_AS(valid(R"({"grid":{"n":32},"solver":{"k":40}})"), ConfigError);
    CHECK_THROWS_AS(valid(R"({"geodesic":{"q0":[0,0,0]}})"), ConfigError);
    CHECK_THROWS_AS(valid(R"({"geodesic":{"dt":0}})"), ConfigError);
    CHECK_THROWS_AS(valid(R"({"check":{"criteria":[11]}})"), ConfigError);
    CHECK_THROWS_AS(valid(R"({"check":{"perturb_coefficient":"a_xx"}})"), ConfigError);
    CHECK_THROWS_AS(valid(R"({"potential":{"kind":"tabulated","theta":[0.5,1.0],"values":[0,1]}})"), ConfigError);
    CHECK(valid("{}").grid.n == 2000);
    CHECK(valid(R"({"manifold":{"kind":"torus"}})").grid.n == 1024);
    CHECK(valid(R"({"manifold":{"kind":"pseudosphere"},"rotor":{"sig":-1}})").rotor.sig == -1);
  }

  TEST_CASE("configuration round-trips through JSON") {
    RunConfig c = parse_config(Json::parse(R"({"manifold":{"kind":"torus","R":0.5,"L":2},"quantum":{"m":2}})"));
    const Json j = to_json(c);
    const RunConfig d = parse_config(j);
    CHECK(to_json(d) == j);
    CHECK(d.manifold.L == 2.0);
    CHECK(d.quantum.m == 2);
  }

  TEST_CASE("dotted overrides") {
    Json doc = Json::object();
    apply_assignment(doc, "manifold.R=2.5");
    apply_assignment(doc, "manifold.kind=torus");
    apply_assignment(doc, "quantum.m_range=[-1,2]");
    const RunConfig c = parse_config(doc);
    CHECK(c.manifold.R == 2.5);
    CHECK(c.manifold.kind == "torus");
    CHECK(c.quantum.m_range == std::pair{-1, 2});
    CHECK_THROWS_AS(apply_assignment(doc, "noequals"), ConfigError);
  }

  TEST_CASE("flags override file values, --set overrides flags") {
    const std::string cfg = write_file("override.json", R"({"manifold":{"kind":"sphere","R":2.0},"grid":{"n":64},"solver":{"k":2}})");
    const Run a = run({"spectrum", "--config", cfg, "--R", "3"});
    REQUIRE(a.code == 0);
    CHECK(a.out.find("\"R\":3.0") != std::string::npos);
    const Run b = run({"spectrum", "--config", cfg, "--R", "3", "--set", "manifold.R=4"});
    REQUIRE(b.code == 0);
    CHECK(b.out.find("\"R\":4.0") != std::string::npos);
    const Run c = run({"spectrum", "--config", cfg});
    CHECK(c.out.find("\"R\":2.0") != std::string::npos);
  }

  TEST_CASE("exit code 2 for configuration errors") {
    const std::string out = (scratch_dir() / "never.csv").string();
    const Run neg = run({"spectrum", "--R", "-1", "--output", out});
    CHECK(neg.code == 2);
    CHECK_FALSE(fs::exists(out));
    CHECK_FALSE(neg.err.empty());
    CHECK(run({"spectrum", "--config", write_file("bad.json", R"({"typo":1})")}).code == 2);
    CHECK(run({"spectrum", "--config", write_file("broken.json", "{not json")}).code == 2);
    CHECK(run({"spectrum", "--config", (scratch_dir() / "missing.json").string()}).code == 2);
    CHECK(run({"spectrum", "--no-such-flag"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({}).code == 2);
  }

  TEST_CASE("spectrum: sphere resonance oracle, written to a file") {
    const std::string out = (scratch_dir() / "legendre.csv").string();
    const Run r = run({"spectrum", "--n", "2000", "--k", "6", "--output", out});
    REQUIRE(r.code == 0);
    const std::string text = read_file(out);
    CHECK(text.rfind("# config: {", 0) == 0);
    const std::vector<double> eps = column(text, 1);
    REQUIRE(eps.size() == 6);
    for (int j = 0; j < 6; ++j) CHECK(std::abs(eps[j] - j * (j + 1)) <= 1e-4 * std::max(1, j * (j + 1)));
  }

  TEST_CASE("spectrum: torus constant mode") {
    const Run r = run({"spectrum", "--manifold", "torus", "--k", "1", "--n", "256"});
    REQUIRE(r.code == 0);
    CHECK(std::abs(column(r.out, 1).at(0)) < 1e-8);
  }

  TEST_CASE("spectrum: JSON output carries config and eigenfunctions") {
    const Run r = run({"spectrum", "--n", "64", "--k", "2", "--json"});
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j.contains("config"));
    CHECK(j["config"]["grid"]["n"] == 64);
    CHECK(j["result"]["eigenvalues_dimensionless"].size() == 2);
    CHECK(j["result"]["eigenfunctions"].size() == 2);
    CHECK(j["result"]["nodes"].size() == 64);
  }

  TEST_CASE("identical configuration gives byte-identical output") {
    const std::string cfg = write_file("det.json", R"({"manifold":{"kind":"pseudosphere"},"potential":{"kind":"cosine_well","V0":1},"grid":{"n":300,"theta_max":8},"quantum":{"m_range":[-1,1],"s_range":[0,1]},"solver":{"k":3}})");
    const Run a = run({"scan", "--config", cfg});
    ::setenv("ROTORLAB_THREADS", "4", 1);
    const Run b = run({"scan", "--config", cfg});
    ::unsetenv("ROTORLAB_THREADS");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(run({"spectrum", "--config", cfg}).out == run({"spectrum", "--config", cfg}).out);
  }

  TEST_CASE("scan: single cell equals spectrum, mirrored cells agree") {
    const std::vector<std::string> common{"--manifold", "sphere", "--I", "0.6", "--n", "400", "--k", "3"};
    auto with = [&](std::vector<std::string> head) {
      head.insert(head.end(), common.begin(), common.end());
      return run(head);
    };
    const Run spec = with({"spectrum", "--m", "1", "--s", "-2"});
    const Run scan = with({"scan", "--m-range", "1", "1", "--s-range", "-2", "-2"});
    REQUIRE(spec.code == 0);
    REQUIRE(scan.code == 0);
    const auto srows = csv_rows(scan.out), prows = csv_rows(spec.out);
    REQUIRE(srows.size() == prows.size());
    for (std::size_t i = 0; i < srows.size(); ++i) {
      CHECK(srows[i][3] == prows[i][1]);
      CHECK(srows[i][5] == prows[i][3]);
    }

    const Run all = with({"scan", "--m-range", "-2", "2", "--s-range", "-2", "2"});
    REQUIRE(all.code == 0);
    std::map<std::tuple<int, int, int>, std::string> eps;
    for (const auto& r : csv_rows(all.out)) eps[{std::stoi(r[0]), std::stoi(r[1]), std::stoi(r[2])}] = r[3];
    CHECK(eps.size() == 75);
    for (const auto& [key, value] : eps) {
      const auto [m, s, j] = key;
      CHECK(std::stod(value) == doctest::Approx(std::stod(eps.at({-m, -s, j}))).epsilon(1e-12));
    }
  }

  TEST_CASE("scan: failing cells give exit 3 but the table is still written") {
    // A truncation this close to the pole puts the first node inside the endpoint tolerance.
    const Run r = run({"scan", "--manifold", "pseudosphere", "--n", "16", "--k", "2", "--m-range", "0", "1",
                       "--theta-max", "1e-8"});
    CHECK(r.code == 3);
    CHECK(r.out.find("# error m=0 s=0") != std::string::npos);
    CHECK(r.out.find("m,s,index,eps") != std::string::npos);
  }

  TEST_CASE("geodesic: equator rows and exit 4 on a pole approach") {
    const Run eq = run({"geodesic", "--steps", "200"});
    REQUIRE(eq.code == 0);
    for (double theta : column(eq.out, 1)) CHECK(theta == doctest::Approx(1.5707963267948966).epsilon(1e-15));
    for (double drift : column(eq.out, 8)) CHECK(std::abs(drift) < 1e-12);
    CHECK(eq.out.find("# status=ok") != std::string::npos);

    const std::string out = (scratch_dir() / "pole.csv").string();
    const Run pole = run({"geodesic", "--q0", "0.5", "0", "0", "--p0", "1", "0", "0", "--steps", "100000", "--output", out});
    CHECK(pole.code == 4);
    const std::string text = read_file(out);
    CHECK(text.find("# status=pole_approach") != std::string::npos);
    CHECK(csv_rows(text).size() > 100);
  }

  TEST_CASE("hj: turning points and exit 3 without an allowed region") {
    const Run r = run({"hj", "--E", "1", "--mu", "1", "--points", "11"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("# turning_point=0.78539816") != std::string::npos);
    CHECK(csv_rows(r.out).size() == 11);
    CHECK(run({"hj", "--E", "0.1", "--mu", "3"}).code == 3);
  }

  TEST_CASE("check: subset, JSON report and injected perturbation") {
    const Run ok = run({"check", "--criteria", "3", "4"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("C3 PASS") != std::string::npos);
    CHECK(ok.out.find("2/2 checks passed") != std::string::npos);

    const Run js = run({"check", "--criteria", "5", "--json"});
    CHECK(js.code == 0);
    const Json j = Json::parse(js.out);
    CHECK(j["passed"] == true);
    REQUIRE(j["checks"].size() == 1);
    CHECK(j["checks"][0]["id"] == 5);
    CHECK(j["checks"][0].contains("measured"));

    const Run bad = run({"check", "--criteria", "3", "--perturb-coefficient", "a_ss"});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("C3") != std::string::npos);
    CHECK(bad.out.find("C3 FAIL") != std::string::npos);
  }
}

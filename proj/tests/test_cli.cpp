#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <unistd.h>

#include "cli.hpp"

namespace fs = std::filesystem;
using pinw::cli::run_cli;

namespace {

const std::string kData = PINW_TEST_DATA_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("pinw_cli_" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("mesh from a coarse file") {
  TempDir dir;
  const Run r = run({"mesh", "--coarse", kData + "/tri3.node", "--h", "0.1", "--out", dir / "m"});
  CHECK(r.code == 0);
  for (const char* ext : {".node", ".off", ".svg", ".report.json"}) CHECK(fs::exists(dir / (std::string("m") + ext)));
  const auto rep = nlohmann::json::parse(slurp(dir / "m.report.json"));
  CHECK(rep["mesh"]["conforming"] == true);
  CHECK(rep["collapse"]["rejected"] == 0);
  CHECK(rep["audit"]["max_aspect_growth"].get<double>() <= 1.22);
  CHECK(run({"validate", "--mesh", dir / "m.node"}).code == 0);
}

TEST_CASE("identical runs give identical files") {
  TempDir dir;
  const std::vector<std::string> base{"mesh", "--polygon", kData + "/quad.poly", "--h", "0.15", "--seed", "4"};
  auto a = base, b = base;
  a.insert(a.end(), {"--out", dir / "a"});
  b.insert(b.end(), {"--out", dir / "b", "--threads", "3"});
  REQUIRE(run(a).code == 0);
  REQUIRE(run(b).code == 0);
  for (const char* ext : {".node", ".off", ".svg", ".report.json"})
    CHECK(slurp(dir / (std::string("a") + ext)) == slurp(dir / (std::string("b") + ext)));

  REQUIRE(run({"measure", "--classic", "--levels", "1..2", "--no-timing", "--out", dir / "c1"}).code == 0);
  REQUIRE(run({"measure", "--classic", "--levels", "1..2", "--no-timing", "--out", dir / "c2"}).code == 0);
  CHECK(slurp(dir / "c1.csv") == slurp(dir / "c2.csv"));
  CHECK(slurp(dir / "c1.witness.svg") == slurp(dir / "c2.witness.svg"));
}

TEST_CASE("classic mesh") {
  TempDir dir;
  const Run r = run({"mesh", "--classic", "--rect12", "--levels", "2", "--out", dir / "c"});
  CHECK(r.code == 0);
  const auto rep = nlohmann::json::parse(slurp(dir / "c.report.json"));
  CHECK(rep["forest"]["leaves"] == 50);
  CHECK(rep["mesh"]["conforming"] == true);
}

TEST_CASE("dynamic delta reports accepted and rejected moves") {
  TempDir dir;
  const Run r = run({"mesh", "--coarse", kData + "/tri3.node", "--h", "0.1", "--delta-mode", "dynamic:0.05", "--out", dir / "d"});
  CHECK(r.code == 0);
  const auto rep = nlohmann::json::parse(slurp(dir / "d.report.json"));
  CHECK(rep["input"]["delta_mode"] == "dynamic");
  CHECK(rep["collapse"].contains("accepted"));
  CHECK(rep["collapse"].contains("rejected"));
  CHECK(rep["collapse"]["candidates"].get<int>() ==
        rep["collapse"]["accepted"].get<int>() + rep["collapse"]["rejected"].get<int>());
}

TEST_CASE("exit codes") {
  TempDir dir;
  const std::string tri3 = kData + "/tri3.node";
  CHECK(run({"mesh", "--coarse", tri3, "--levels", "2", "--h", "0.1"}).code == 2);
  CHECK(run({"mesh", "--coarse", tri3, "--h", "-1"}).code == 2);
  CHECK(run({"mesh", "--coarse", dir / "missing.node", "--h", "0.1"}).code == 2);
  CHECK(run({"mesh", "--coarse", tri3, "--h", "0.1", "--bogus"}).code == 2);
  CHECK(run({"mesh", "--coarse", tri3, "--h", "0.1", "--delta-mode", "sideways"}).code == 2);
  CHECK(run({"mesh", "--coarse", tri3, "--h", "0.1", "--rational-guard", "on:x:1"}).code == 2);
  CHECK(run({"mesh", "--classic", "--levels", "2"}).code == 2);
  CHECK(run({}).code == 2);
  const Run tight = run({"mesh", "--coarse", tri3, "--h", "0.2", "--delta-divisor", "0.2", "--out", dir / "x"});
  CHECK(tight.code == 3);
  CHECK(tight.err.find("delta_property") != std::string::npos);
  const Run far = run({"measure", "--baseline", "grid", "--n", "4", "--l", "5", "--out", dir / "g"});
  CHECK(far.code == 2);
  CHECK(far.err.find("l_too_large") != std::string::npos);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("measure rows") {
  TempDir dir;
  const Run r = run({"measure", "--classic", "--levels", "1..3", "--l", "1", "--no-timing", "--out", dir / "t"});
  REQUIRE(r.code == 0);
  std::istringstream csv(slurp(dir / "t.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "level_or_target,vertices,edges,deviation_ratio,witness_p,witness_q,seconds");
  const double expected[] = {1.3416, 1.1948, 1.1843};
  for (int i = 0; i < 3; ++i) {
    REQUIRE(std::getline(csv, line));
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    REQUIRE(cols.size() == 7);
    CHECK(cols[0] == std::to_string(i + 1));
    CHECK(std::stod(cols[3]) == doctest::Approx(expected[i]).epsilon(1e-4));
    CHECK(cols[6] == "0");
  }
  CHECK(slurp(dir / "t.witness.svg").find("<polyline") != std::string::npos);

  const Run grid = run({"measure", "--baseline", "grid", "--n", "16", "--l", "1", "--out", dir / "g"});
  REQUIRE(grid.code == 0);
  CHECK(grid.out.find("grid:16,289,") != std::string::npos);
}

TEST_CASE("render") {
  TempDir dir;
  {
    std::ofstream f(dir / "one.node");
    f << "3 1\n0 0\n1 0\n0 1\n0 1 2\n";
  }
  const Run a = run({"render", dir / "one.node"});
  REQUIRE(a.code == 0);
  std::size_t polygons = 0;
  for (auto p = a.out.find("<polygon"); p != std::string::npos; p = a.out.find("<polygon", p + 1)) ++polygons;
  CHECK(polygons == 1);
  CHECK(a.out == run({"render", dir / "one.node"}).out);
  const Run b = run({"render", dir / "one.node", "--highlight-path", "1,2", "--stroke-width", "0.5"});
  REQUIRE(b.code == 0);
  CHECK(b.out.find("<polyline") != std::string::npos);
  CHECK(run({"render", dir / "one.node", "--highlight-path", "1,9"}).code == 2);
  CHECK(run({"render", dir / "missing.node"}).code == 2);
}

TEST_CASE("validate") {
  CHECK(run({"validate", "--coarse", kData + "/tri3.node"}).code == 0);
  TempDir dir;
  {
    std::ofstream f(dir / "hang.node");
    f << "5 3\n0 0\n2 0\n1 1\n1 0\n1 -1\n0 1 2\n0 4 3\n3 4 1\n";
  }
  CHECK(run({"validate", "--mesh", dir / "hang.node"}).code == 2);
  CHECK(run({"validate", "--coarse", dir / "hang.node"}).code == 2);
}

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "ripdg/experiments.hpp"

using namespace ripdg;
using nlohmann::json;

namespace {

std::string readFile(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Drop the trailing wall_ms column of every line.
std::string withoutWallTime(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + "\n";
  return out;
}

json smallConfig() {
  return json::parse(R"({
    "problem": {"key": "poisson_sine"},
    "mesh": {"kind": "uniform_squares", "n": [2, 4]},
    "space": {"degree": [1, 2]},
    "method": [{"name": "ipdg", "variant": "ipdg"}, {"name": "ripdg", "variant": "ripdg"}],
    "solver": {"tol": 1e-12},
    "output": {"name": "small"}
  })");
}

}  // namespace

TEST_CASE("config parsing rejects unknown keys and bad values") {
  CHECK_NOTHROW(parseConfig(smallConfig()));
  for (const char* path : {"/colour", "/mesh/colour", "/space/colour", "/solver/colour", "/output/colour"}) {
    json j = smallConfig();
    j[json::json_pointer(path)] = 1;
    CHECK_THROWS_AS(parseConfig(j), ConfigError);
  }
  json j = smallConfig();
  j["method"][0]["penalty"] = 2.0;
  CHECK_THROWS_AS(parseConfig(j), ConfigError);
  j = smallConfig();
  j["problem"]["key"] = "heat";
  CHECK_THROWS_AS(parseConfig(j), ConfigError);
  j = smallConfig();
  j["method"][1]["theta"] = 2.0;
  CHECK_THROWS_AS(parseConfig(j), ConfigError);
  j = smallConfig();
  j["mesh"]["kind"] = "hexagons";
  CHECK_THROWS_AS(parseConfig(j), ConfigError);
  j = smallConfig();
  j["space"]["degree"] = "two";
  CHECK_THROWS_AS(parseConfig(j), ConfigError);
  CHECK_THROWS_AS(preset("ex9"), ConfigError);
  CHECK_THROWS_AS(loadConfig("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("presets resolve the layer width") {
  PresetOverrides o;
  o.p = 1;
  const ExperimentConfig c1 = preset("ex1", o);
  const Mesh m1 = buildMesh(c1.mesh, 1, 1);
  CHECK(m1.element(0).bbox.width() == doctest::Approx(2.8460e-3).epsilon(1e-4));

  o.p = 8;
  o.eps = 1e-3;
  const ExperimentConfig c8 = preset("ex1", o);
  CHECK(c8.degrees == std::vector<int>{8});
  CHECK(buildMesh(c8.mesh, 1, 8).element(0).bbox.width() == doctest::Approx(0.22768).epsilon(1e-4));
  CHECK(buildMesh(c8.mesh, 1, 30).element(0).bbox.width() == doctest::Approx(0.5).epsilon(1e-14));

  CHECK(preset("ex1").degrees.size() == 7);
  CHECK(preset("ex1zz").degrees.size() == 6);
  CHECK(preset("ex1zz").mesh.teeth == 4);
  PresetOverrides only;
  only.method = "ripdg";
  CHECK(preset("ex3", only).methods.size() == 1);
}

TEST_CASE("ex2 layout") {
  const ExperimentConfig c = preset("ex2");
  const Mesh m = buildMesh(c.mesh, c.mesh.n.front(), c.degrees.front());
  std::vector<int> deg(m.numElements(), c.degrees.front());
  deg[centerElement(m)] = c.centerDegrees.front();
  CHECK(centerElement(m) == 4);
  const DgSpace s(m, deg);
  CHECK(s.numDofs() == 544);
  CHECK(centerElement(buildCenterMergedGrid()) >= 0);
}

TEST_CASE("CSV schema and determinism") {
  const ExperimentConfig c = parseConfig(smallConfig());
  const auto rows = runExperiment(c);
  REQUIRE(rows.size() == 8);
  CHECK(rows[0].runId == "small_n2_p1");
  CHECK(rows[0].method == "ipdg");
  CHECK(rows[1].method == "ripdg");
  CHECK(rows[7].runId == "small_n4_p2");
  for (const auto& r : rows) {
    CHECK(r.errL2 >= 0.0);
    CHECK(r.errDg >= r.errH1 * (1.0 - 1e-12));
    CHECK(r.cond2 >= 1.0);
    CHECK(r.wallMs >= 0.0);
  }

  const std::string row = csvRow(rows[0]);
  int commas = 0;
  for (char ch : row) commas += ch == ',';
  CHECK(commas == 12);
  // Floats carry 17 significant digits and round-trip exactly.
  std::vector<std::string> fields;
  std::stringstream ss(row);
  for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
  CHECK(std::stod(fields[5]) == rows[0].errL2);
  CHECK(std::stod(fields[8]) == rows[0].maxSigmaInterior);

  const auto dir = std::filesystem::temp_directory_path() / "ripdg_csv_test";
  std::filesystem::remove_all(dir);
  writeCsvAtomic((dir / "a.csv").string(), rows);
  writeCsvAtomic((dir / "b.csv").string(), runExperiment(c));
  const std::string a = readFile(dir / "a.csv");
  CHECK(a.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
  CHECK(withoutWallTime(a) == withoutWallTime(readFile(dir / "b.csv")));
  CHECK_FALSE(std::filesystem::exists(dir / "a.csv.tmp"));

  writeReportJson((dir / "r.json").string(), c, rows);
  const json rep = json::parse(readFile(dir / "r.json"));
  CHECK(rep["runs"].size() == 8);
  CHECK(rep["runs"][0].contains("err_dg_no_reaction"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("uniform-identity preset") {
  const ExperimentConfig c = preset("uniform-identity");
  REQUIRE(c.methods.size() == 2);
  const ProblemSpec pb = makeProblem(c.problemKey, c.problemParameter);
  const Mesh m = buildMesh(c.mesh, 4, 2);
  const DgSpace s(m, 2);
  const RunOutcome a = runOnce("a", "ipdg", pb, s, c.methods[0].config, c.solver);
  const RunOutcome b = runOnce("b", "ripdg", pb, s, c.methods[1].config, c.solver);
  CHECK(errorL2(s, a.solution - b.solution, [](Point) { return 0.0; }) <= 1e-12);
}

TEST_CASE("worked-quads preset") {
  const auto rows = runExperiment(preset("worked-quads"));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].maxSigmaInterior == doctest::Approx(96.0).epsilon(1e-12));
  CHECK(rows[1].maxSigmaInterior == doctest::Approx(25.72312).epsilon(1e-6));
}

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "ripdg/analysis.hpp"
#include "ripdg/assembly.hpp"
#include "ripdg/linalg.hpp"
#include "ripdg/mesh.hpp"

namespace ripdg {

/// Thrown for configuration problems that map to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MeshSpec {
  std::string kind = "uniform_squares";  // uniform_squares | uniform_triangles | nine_element | zigzag
                                         // | two_quads | center_merged | agglomerate
  std::vector<int> n{4};                 // sweep over grid sizes (grid generators, agglomerate fine grid)
  BoundingBox domain{{0.0, 0.0}, {1.0, 1.0}};
  double l = 0.1;
  // When set, l = min(lambda * p * sqrt(eps), max) for every degree p.
  struct LRule {
    double lambda = 0.9;
    double eps = 1e-5;
    double max = 0.5;
  };
  std::optional<LRule> lRule;
  int teeth = 4;
  double delta = 0.25;
  int target = 16;
  std::uint64_t seed = 1;
};

struct NamedMethod {
  std::string name;
  MethodConfig config;
};

struct SolverOptions {
  double tol = 1e-12;
  bool condition = true;
  CondMethod condMethod = CondMethod::Auto;
};

struct ExperimentConfig {
  std::string name = "run";
  std::string problemKey = "poisson_sine";
  double problemParameter = 0.0;
  MeshSpec mesh;
  std::vector<int> degrees{1};
  std::vector<int> centerDegrees;  // empty: uniform degree
  std::vector<NamedMethod> methods;
  SolverOptions solver;
  std::string csvPath = "results.csv";
  std::string reportPath = "report.json";
  int errorQuadExtra = 0;
};

struct RunReport {
  std::string runId;
  std::string method;
  int pMin = 0;
  int pMax = 0;
  int dofs = 0;
  double errL2 = 0.0;
  double errH1 = 0.0;
  double errDg = 0.0;  // includes |sqrt(c) e| for reaction problems
  double errDgNoReaction = 0.0;
  double maxSigmaInterior = 0.0;
  double maxSigmaGlobal = 0.0;
  double maxTauInterior = 0.0;
  double cond2 = 0.0;
  int iters = 0;
  double wallMs = 0.0;
  nlohmann::json extra = nlohmann::json::object();
};

struct RunOutcome {
  RunReport report;
  Eigen::VectorXd solution;
};

/// Parse and validate a config; unknown keys are rejected.
ExperimentConfig parseConfig(const nlohmann::json& j);
ExperimentConfig loadConfig(const std::string& path);

struct PresetOverrides {
  std::optional<int> p;
  std::optional<double> eps;
  std::string method = "both";  // ipdg | ripdg | both
};

std::vector<std::string> presetNames();
ExperimentConfig preset(const std::string& name, const PresetOverrides& overrides = {});

/// Build the mesh of one sweep entry.
Mesh buildMesh(const MeshSpec& spec, int n, int degree);

/// Element whose interior contains the domain centre (first match).
int centerElement(const Mesh& mesh);

/// Assemble, solve, and evaluate one configuration.
RunOutcome runOnce(const std::string& runId, const std::string& methodName, const ProblemSpec& problem,
                   const DgSpace& space, const MethodConfig& method, const SolverOptions& solver,
                   int errorQuadExtra = 0);

/// Run every (mesh size, degree, centre degree, method) combination in config order.
std::vector<RunReport> runExperiment(const ExperimentConfig& config);

inline constexpr const char* kCsvHeader =
    "run_id,method,p_min,p_max,dofs,err_l2,err_h1,err_dg,max_sigma_interior,max_sigma_global,cond2,iters,wall_ms";

std::string csvRow(const RunReport& r);
/// Write header + rows through a temporary file and rename.
void writeCsvAtomic(const std::string& path, const std::vector<RunReport>& rows);
void writeReportJson(const std::string& path, const ExperimentConfig& config, const std::vector<RunReport>& rows);

}  // namespace ripdg

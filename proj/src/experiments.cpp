#include "ripdg/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace ripdg {

using nlohmann::json;

namespace {

void checkKeys(const json& j, const std::set<std::string>& allowed, const std::string& context) {
  if (!j.is_object()) throw ConfigError(context + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ConfigError(context + ": unknown key '" + key + "'");
  }
}

template <class T>
T get(const json& j, const std::string& key, T fallback, const std::string& context) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(context + "." + key + ": " + e.what());
  }
}

std::vector<int> intList(const json& j, const std::string& key, std::vector<int> fallback, const std::string& ctx) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  try {
    if (v.is_array()) return v.get<std::vector<int>>();
    return {v.get<int>()};
  } catch (const json::exception& e) {
    throw ConfigError(ctx + "." + key + ": " + e.what());
  }
}

NamedMethod parseMethod(const json& j) {
  const std::string ctx = "method";
  checkKeys(j,
            {"name", "variant", "weight_scheme", "theta", "penalty_scale", "quad_inc", "boundary_penalty",
             "notional_box_subdivision", "linf_safety"},
            ctx);
  NamedMethod m;
  try {
    m.config.variant = parseVariant(get<std::string>(j, "variant", "ripdg", ctx));
    m.config.weightScheme = parseWeightScheme(get<std::string>(j, "weight_scheme", "arithmetic", ctx));
    m.config.boundaryPenalty = parseBoundaryPenalty(get<std::string>(j, "boundary_penalty", "one_sided", ctx));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("method: ") + e.what());
  }
  m.config.theta = get<double>(j, "theta", 1.0, ctx);
  m.config.penaltyScale = get<double>(j, "penalty_scale", 1.0, ctx);
  m.config.quadInc = get<int>(j, "quad_inc", 3, ctx);
  m.config.notionalBoxSubdivision = get<bool>(j, "notional_box_subdivision", false, ctx);
  m.config.linfSafety = get<double>(j, "linf_safety", 1.0, ctx);
  m.name = get<std::string>(j, "name", toString(m.config.variant), ctx);
  try {
    m.config.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return m;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const std::set<std::string> kMeshKinds{"uniform_squares", "uniform_triangles", "nine_element", "zigzag",
                                       "two_quads",       "center_merged",     "agglomerate"};

}  // namespace

ExperimentConfig parseConfig(const json& j) {
  checkKeys(j, {"problem", "mesh", "space", "method", "solver", "output"}, "config");
  ExperimentConfig c;

  const json problem = j.value("problem", json::object());
  checkKeys(problem, {"key", "parameter"}, "problem");
  c.problemKey = get<std::string>(problem, "key", c.problemKey, "problem");
  c.problemParameter = get<double>(problem, "parameter", 0.0, "problem");
  try {
    (void)makeProblem(c.problemKey, c.problemParameter);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("problem: ") + e.what());
  }

  const json mesh = j.value("mesh", json::object());
  checkKeys(mesh, {"kind", "n", "domain", "l", "l_rule", "teeth", "delta", "target", "seed"}, "mesh");
  c.mesh.kind = get<std::string>(mesh, "kind", c.mesh.kind, "mesh");
  if (!kMeshKinds.count(c.mesh.kind)) throw ConfigError("mesh: unknown kind '" + c.mesh.kind + "'");
  c.mesh.n = intList(mesh, "n", c.mesh.n, "mesh");
  if (mesh.contains("domain")) {
    const auto d = get<std::vector<double>>(mesh, "domain", {}, "mesh");
    if (d.size() != 4) throw ConfigError("mesh.domain: expected [x0, y0, x1, y1]");
    c.mesh.domain = {{d[0], d[1]}, {d[2], d[3]}};
  } else {
    c.mesh.domain = makeProblem(c.problemKey, c.problemParameter).domain;
  }
  c.mesh.l = get<double>(mesh, "l", c.mesh.l, "mesh");
  if (mesh.contains("l_rule")) {
    const json& r = mesh.at("l_rule");
    checkKeys(r, {"lambda", "eps", "max"}, "mesh.l_rule");
    MeshSpec::LRule rule;
    rule.lambda = get<double>(r, "lambda", rule.lambda, "mesh.l_rule");
    rule.eps = get<double>(r, "eps", rule.eps, "mesh.l_rule");
    rule.max = get<double>(r, "max", rule.max, "mesh.l_rule");
    c.mesh.lRule = rule;
  }
  c.mesh.teeth = get<int>(mesh, "teeth", c.mesh.teeth, "mesh");
  c.mesh.delta = get<double>(mesh, "delta", c.mesh.delta, "mesh");
  c.mesh.target = get<int>(mesh, "target", c.mesh.target, "mesh");
  c.mesh.seed = get<std::uint64_t>(mesh, "seed", c.mesh.seed, "mesh");
  for (int n : c.mesh.n)
    if (n < 1) throw ConfigError("mesh.n: entries must be >= 1");

  const json space = j.value("space", json::object());
  checkKeys(space, {"degree", "center_degree"}, "space");
  c.degrees = intList(space, "degree", c.degrees, "space");
  c.centerDegrees = intList(space, "center_degree", {}, "space");
  if (c.degrees.empty()) throw ConfigError("space.degree: at least one degree required");
  for (int p : c.degrees)
    if (p < 0) throw ConfigError("space.degree: negative degree");
  for (int p : c.centerDegrees)
    if (p < 0) throw ConfigError("space.center_degree: negative degree");

  if (j.contains("method")) {
    const json& m = j.at("method");
    if (m.is_array()) {
      for (const json& e : m) c.methods.push_back(parseMethod(e));
    } else {
      c.methods.push_back(parseMethod(m));
    }
  }
  if (c.methods.empty()) throw ConfigError("method: at least one method required");

  const json solver = j.value("solver", json::object());
  checkKeys(solver, {"tol", "condition", "cond_method"}, "solver");
  c.solver.tol = get<double>(solver, "tol", c.solver.tol, "solver");
  c.solver.condition = get<bool>(solver, "condition", c.solver.condition, "solver");
  const std::string cm = get<std::string>(solver, "cond_method", "auto", "solver");
  if (cm == "auto") c.solver.condMethod = CondMethod::Auto;
  else if (cm == "dense") c.solver.condMethod = CondMethod::Dense;
  else if (cm == "lanczos") c.solver.condMethod = CondMethod::Lanczos;
  else throw ConfigError("solver.cond_method: expected auto, dense or lanczos");
  if (!(c.solver.tol > 0.0)) throw ConfigError("solver.tol must be positive");

  const json output = j.value("output", json::object());
  checkKeys(output, {"name", "csv", "report", "error_quad_extra"}, "output");
  c.name = get<std::string>(output, "name", c.name, "output");
  c.csvPath = get<std::string>(output, "csv", c.csvPath, "output");
  c.reportPath = get<std::string>(output, "report", c.reportPath, "output");
  c.errorQuadExtra = get<int>(output, "error_quad_extra", 0, "output");
  if (c.errorQuadExtra < 0) throw ConfigError("output.error_quad_extra must be nonnegative");
  return c;
}

ExperimentConfig loadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config parse error: " + std::string(e.what()));
  }
  return parseConfig(j);
}

std::vector<std::string> presetNames() {
  return {"ex1", "ex1zz", "ex2", "ex2qual", "ex3", "uniform-identity", "worked-quads"};
}

ExperimentConfig preset(const std::string& name, const PresetOverrides& ov) {
  auto methodList = [&](json ipdg, json ripdg) {
    json list = json::array();
    if (ov.method == "ipdg" || ov.method == "both") list.push_back(ipdg);
    if (ov.method == "ripdg" || ov.method == "both") list.push_back(ripdg);
    if (list.empty()) throw ConfigError("--method must be ipdg, ripdg or both");
    return list;
  };
  auto degrees = [&](json fallback) { return ov.p ? json(*ov.p) : fallback; };

  json j;
  if (name == "ex1" || name == "ex1zz") {
    const bool zz = name == "ex1zz";
    const double eps = ov.eps.value_or(zz ? 1e-3 : 1e-5);
    // Resolving the O(sqrt(eps)) layers inside the large elements needs far
    // more quadrature than the polynomial degree alone suggests.
    const int quadInc = zz ? 80 : 300;
    j["problem"] = {{"key", "boundary_layer"}, {"parameter", eps}};
    j["mesh"] = {{"kind", zz ? "zigzag" : "nine_element"},
                 {"l_rule", {{"lambda", 0.9}, {"eps", eps}, {"max", 0.5}}},
                 {"teeth", 4}};
    j["space"] = {{"degree", degrees(zz ? json{1, 2, 3, 4, 5, 6} : json{1, 2, 3, 4, 5, 6, 7})}};
    j["method"] = methodList({{"name", "ipdg"}, {"variant", "ipdg"}, {"quad_inc", quadInc}},
                             {{"name", "ripdg"}, {"variant", "ripdg"}, {"quad_inc", quadInc}});
    j["output"] = {{"name", name}, {"error_quad_extra", quadInc}};
  } else if (name == "ex2" || name == "ex2qual") {
    const bool qual = name == "ex2qual";
    j["problem"] = {{"key", "gaussian_peak"}, {"parameter", qual ? 10.0 : 100.0}};
    if (qual) {
      j["mesh"] = {{"kind", "center_merged"}};
      j["space"] = {{"degree", degrees(1)}, {"center_degree", {3, 5, 8}}};
    } else {
      j["mesh"] = {{"kind", "uniform_squares"}, {"n", 3}, {"domain", {-1.0, -1.0, 1.0, 1.0}}};
      j["space"] = {{"degree", degrees(2)}, {"center_degree", 30}};
    }
    // The low-degree outer elements see the Gaussian tail; the default
    // increment leaves the load visibly under-integrated there.
    const int quadInc = 30;
    j["method"] = methodList({{"name", "ipdg"}, {"variant", "ipdg"}, {"quad_inc", quadInc}},
                             {{"name", "ripdg"}, {"variant", "ripdg"}, {"quad_inc", quadInc}});
    j["output"] = {{"name", name}, {"error_quad_extra", 20}};
  } else if (name == "ex3") {
    j["problem"] = {{"key", "poisson_sine"}};
    j["mesh"] = {{"kind", "agglomerate"}, {"n", 16}, {"target", 16}, {"seed", 1}, {"domain", {0.0, 0.0, 1.0, 1.0}}};
    j["space"] = {{"degree", degrees(json{1, 2, 3, 4})}};
    j["method"] = methodList({{"name", "ipdg"}, {"variant", "ipdg"}}, {{"name", "ripdg"}, {"variant", "ripdg"}});
    j["output"] = {{"name", name}};
  } else if (name == "uniform-identity") {
    j["problem"] = {{"key", "poisson_sine"}};
    j["mesh"] = {{"kind", "uniform_squares"}, {"n", 4}};
    j["space"] = {{"degree", degrees(2)}};
    j["method"] = methodList(
        {{"name", "ipdg"}, {"variant", "ipdg"}},
        {{"name", "ripdg_x2"}, {"variant", "ripdg"}, {"penalty_scale", 2.0}, {"boundary_penalty", "mirrored"}});
    j["output"] = {{"name", name}};
  } else if (name == "worked-quads") {
    j["problem"] = {{"key", "poisson_sine"}};
    j["mesh"] = {{"kind", "two_quads"}, {"delta", 0.25}};
    j["space"] = {{"degree", degrees(2)}};
    j["method"] = methodList({{"name", "ipdg"}, {"variant", "ipdg"}}, {{"name", "ripdg"}, {"variant", "ripdg"}});
    j["output"] = {{"name", name}};
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  j["output"]["csv"] = name + ".csv";
  j["output"]["report"] = name + ".report.json";
  return parseConfig(j);
}

Mesh buildMesh(const MeshSpec& spec, int n, int degree) {
  double l = spec.l;
  if (spec.lRule) l = std::min(spec.lRule->lambda * degree * std::sqrt(spec.lRule->eps), spec.lRule->max);
  try {
    if (spec.kind == "uniform_squares") return buildUniformSquares(n, spec.domain);
    if (spec.kind == "uniform_triangles") return buildUniformTriangles(n, spec.domain);
    if (spec.kind == "nine_element") return buildNineElement(l);
    if (spec.kind == "zigzag") return buildZigzagNineElement(l, spec.teeth);
    if (spec.kind == "two_quads") return buildTwoQuads(spec.delta);
    if (spec.kind == "center_merged") return buildCenterMergedGrid();
    if (spec.kind == "agglomerate") return agglomerate(buildUniformTriangles(n, spec.domain), spec.target, spec.seed);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("mesh: ") + e.what());
  }
  throw ConfigError("mesh: unknown kind '" + spec.kind + "'");
}

int centerElement(const Mesh& mesh) {
  const Point c = mesh.domain().center();
  for (int k = 0; k < mesh.numElements(); ++k) {
    const std::vector<Point> poly = mesh.elementPolygon(k);
    if (strictlyInside(poly, c, 0.0)) return k;
  }
  for (int k = 0; k < mesh.numElements(); ++k)
    if (mesh.element(k).bbox.contains(c)) return k;
  return 0;
}

RunOutcome runOnce(const std::string& runId, const std::string& methodName, const ProblemSpec& problem,
                   const DgSpace& space, const MethodConfig& method, const SolverOptions& solver,
                   int errorQuadExtra) {
  const auto start = std::chrono::steady_clock::now();
  RunOutcome out;
  RunReport& r = out.report;
  r.runId = runId;
  r.method = methodName;
  r.pMin = space.minDegree();
  r.pMax = space.maxDegree();
  r.dofs = space.numDofs();

  const AssembledSystem sys = assemble(space, problem, method);
  r.maxSigmaInterior = sys.maxSigmaInterior;
  r.maxSigmaGlobal = sys.maxSigmaGlobal;
  r.maxTauInterior = sys.maxTauInterior;

  const SolveResult sol = solve(sys.stiffness, sys.load, solver.tol);
  out.solution = sol.x;
  r.iters = sol.iterations;
  if (problem.hasExact()) {
    r.errL2 = errorL2(space, sol.x, problem.exact, errorQuadExtra);
    r.errH1 = errorBrokenH1(space, sol.x, problem.exactGrad, errorQuadExtra);
    const DgError dg = errorDg(space, sol.x, problem, sys.faces, errorQuadExtra);
    r.errDg = dg.withReaction;
    r.errDgNoReaction = dg.withoutReaction;
  }
  if (solver.condition) {
    const ConditionResult cr = conditionNumber2(sys.stiffness, solver.condMethod);
    r.cond2 = cr.cond;
    r.extra["lambda_min"] = cr.lambdaMin;
    r.extra["lambda_max"] = cr.lambdaMax;
    r.extra["cond_method"] = cr.method;
  }
  double gramCond = 0.0;
  for (int k = 0; k < space.mesh().numElements(); ++k) gramCond = std::max(gramCond, space.gramCondition(k));
  r.extra["err_dg_no_reaction"] = r.errDgNoReaction;
  r.extra["max_tau_interior"] = r.maxTauInterior;
  r.extra["solver"] = sol.method;
  r.extra["relative_residual"] = sol.relResidual;
  r.extra["elements"] = space.mesh().numElements();
  r.extra["max_gram_condition"] = gramCond;
  r.extra["variant"] = toString(method.variant);
  r.extra["boundary_penalty"] = toString(method.boundaryPenalty);
  r.extra["penalty_scale"] = method.penaltyScale;
  r.extra["quad_inc"] = method.quadInc;
  r.wallMs = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::vector<RunReport> runExperiment(const ExperimentConfig& config) {
  std::vector<RunReport> rows;
  const ProblemSpec problem = makeProblem(config.problemKey, config.problemParameter);
  std::vector<std::optional<int>> centers;
  for (int c : config.centerDegrees) centers.push_back(c);
  if (centers.empty()) centers.push_back(std::nullopt);

  for (int n : config.mesh.n) {
    for (int p : config.degrees) {
      const Mesh mesh = buildMesh(config.mesh, n, p);
      const auto diags = fatalDiagnostics(mesh);
      if (!diags.empty()) {
        throw ConfigError("mesh validation failed: " + diags.front().kind + ": " + diags.front().message);
      }
      for (const auto& center : centers) {
        std::vector<int> degrees(mesh.numElements(), p);
        std::string runId = config.name + "_n" + std::to_string(n) + "_p" + std::to_string(p);
        if (center) {
          degrees[centerElement(mesh)] = *center;
          runId += "_c" + std::to_string(*center);
        }
        const DgSpace space(mesh, degrees);
        for (const NamedMethod& m : config.methods) {
          RunReport r =
              runOnce(runId, m.name, problem, space, m.config, config.solver, config.errorQuadExtra).report;
          r.extra["n"] = n;
          if (config.mesh.lRule || config.mesh.kind == "nine_element" || config.mesh.kind == "zigzag") {
            r.extra["l"] = config.mesh.lRule
                               ? std::min(config.mesh.lRule->lambda * p * std::sqrt(config.mesh.lRule->eps),
                                          config.mesh.lRule->max)
                               : config.mesh.l;
          }
          rows.push_back(std::move(r));
        }
      }
    }
  }
  return rows;
}

std::string csvRow(const RunReport& r) {
  std::ostringstream os;
  os << r.runId << ',' << r.method << ',' << r.pMin << ',' << r.pMax << ',' << r.dofs << ',' << fmt17(r.errL2) << ','
     << fmt17(r.errH1) << ',' << fmt17(r.errDg) << ',' << fmt17(r.maxSigmaInterior) << ','
     << fmt17(r.maxSigmaGlobal) << ',' << fmt17(r.cond2) << ',' << r.iters << ',' << fmt17(r.wallMs);
  return os.str();
}

namespace {

void writeAtomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
  const std::filesystem::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, target);
}

}  // namespace

void writeCsvAtomic(const std::string& path, const std::vector<RunReport>& rows) {
  std::string content = std::string(kCsvHeader) + "\n";
  for (const RunReport& r : rows) content += csvRow(r) + "\n";
  writeAtomic(path, content);
}

void writeReportJson(const std::string& path, const ExperimentConfig& config, const std::vector<RunReport>& rows) {
  json j;
  j["name"] = config.name;
  j["problem"] = {{"key", config.problemKey}, {"parameter", config.problemParameter}};
  j["runs"] = json::array();
  for (const RunReport& r : rows) {
    json e = r.extra;
    e["run_id"] = r.runId;
    e["method"] = r.method;
    e["dofs"] = r.dofs;
    e["err_l2"] = r.errL2;
    e["err_h1"] = r.errH1;
    e["err_dg"] = r.errDg;
    e["max_sigma_interior"] = r.maxSigmaInterior;
    e["max_sigma_global"] = r.maxSigmaGlobal;
    e["cond2"] = r.cond2;
    j["runs"].push_back(e);
  }
  writeAtomic(path, j.dump(2) + "\n");
}

}  // namespace ripdg

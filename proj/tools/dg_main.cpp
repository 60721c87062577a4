// dg: run DG experiments from a JSON config or a named preset.

#include <omp.h>

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "ripdg/experiments.hpp"

namespace {

void printTable(const std::vector<ripdg::RunReport>& rows) {
  std::printf("%-24s %-9s %5s %6s %12s %12s %12s %12s %12s %12s\n", "run_id", "method", "p", "dofs", "err_l2",
              "err_h1", "err_dg", "sigma_int", "sigma_glob", "cond2");
  for (const auto& r : rows) {
    std::printf("%-24s %-9s %2d-%-2d %6d %12.4e %12.4e %12.4e %12.5e %12.5e %12.4e\n", r.runId.c_str(),
                r.method.c_str(), r.pMin, r.pMax, r.dofs, r.errL2, r.errH1, r.errDg, r.maxSigmaInterior,
                r.maxSigmaGlobal, r.cond2);
  }
}

int execute(ripdg::ExperimentConfig config, const std::string& outDir) {
  if (!outDir.empty()) {
    config.csvPath = (std::filesystem::path(outDir) / std::filesystem::path(config.csvPath).filename()).string();
    config.reportPath =
        (std::filesystem::path(outDir) / std::filesystem::path(config.reportPath).filename()).string();
  }
  const auto rows = ripdg::runExperiment(config);
  ripdg::writeCsvAtomic(config.csvPath, rows);
  ripdg::writeReportJson(config.reportPath, config, rows);
  printTable(rows);
  std::printf("wrote %s and %s\n", config.csvPath.c_str(), config.reportPath.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interior penalty DG experiments (IPDG and RIPDG)"};
  app.require_subcommand(1);

  std::string configPath;
  std::string outDir;
  int threads = 0;
  auto* run = app.add_subcommand("run", "Run a JSON experiment config");
  run->add_option("--config", configPath, "Path to the JSON config")->required();
  run->add_option("--out", outDir, "Output directory for the CSV and report");
  run->add_option("--threads", threads, "Worker threads (0: OpenMP default)")->check(CLI::NonNegativeNumber);

  std::string presetName;
  std::optional<int> p;
  std::optional<double> eps;
  std::string method = "both";
  auto* pre = app.add_subcommand("preset", "Run a named preset");
  pre->add_option("name", presetName, "Preset name")->required()->check(CLI::IsMember(ripdg::presetNames()));
  pre->add_option("--p", p, "Override the polynomial degree");
  pre->add_option("--eps", eps, "Override epsilon (ex1, ex1zz)");
  pre->add_option("--method", method, "ipdg, ripdg or both")->check(CLI::IsMember({"ipdg", "ripdg", "both"}));
  pre->add_option("--out", outDir, "Output directory for the CSV and report");
  pre->add_option("--threads", threads, "Worker threads (0: OpenMP default)")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (threads > 0) omp_set_num_threads(threads);

  try {
    if (*run) return execute(ripdg::loadConfig(configPath), outDir);
    ripdg::PresetOverrides ov;
    ov.p = p;
    ov.eps = eps;
    ov.method = method;
    return execute(ripdg::preset(presetName, ov), outDir);
  } catch (const ripdg::ConfigError& e) {
    std::cerr << "dg: invalid configuration: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "dg: error: " << e.what() << '\n';
    return 1;
  }
}

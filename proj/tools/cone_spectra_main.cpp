#include <CLI11.hpp>
#include <chrono>
#include <iostream>

#include "conespectra/report.hpp"

using namespace conespectra;

int main(int argc, char** argv) {
  CLI::App app{"cone-spectra: spectral and Hardy diagnostics on explicit minimizing cones"};
  app.require_subcommand(1);

  std::string config_path, out_path, format;
  int jobs = 0;
  bool strict_verdicts = false;

  CLI::App* run = app.add_subcommand("run", "execute a config document");
  run->add_option("--config", config_path, "JSON run document")->required();
  run->add_option("--out", out_path, "output path ('-' for stdout)");
  run->add_option("--format", format, "json|csv (overrides the document)");
  run->add_option("--jobs", jobs, "parallel sweep width (default: logical cores)");
  run->add_flag("--strict-verdicts", strict_verdicts, "exit 3 when any bound verdict fails");

  CLI::App* validate = app.add_subcommand("validate", "schema-check a config document");
  validate->add_option("--config", config_path, "JSON run document")->required();

  CLI::App* catalog = app.add_subcommand("catalog", "print known families and registry flags");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (catalog->parsed()) {
    for (const CatalogEntry& entry : catalog_entries())
      std::cout << entry.family << "\n  form: " << entry.form
                << "\n  registry: " << entry.minimizing_rule << "\n";
    return 0;
  }

  RunConfig cfg;
  try {
    cfg = load_config_file(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }

  if (validate->parsed()) {
    std::cout << "ok\n";
    return 0;
  }

  if (!out_path.empty()) cfg.out_path = out_path;
  if (!format.empty()) {
    if (format != "json" && format != "csv") {
      std::cerr << "config error: format must be json or csv\n";
      return 1;
    }
    cfg.format = format;
  }
  if (jobs > 0) cfg.jobs = jobs;

  const auto t0 = std::chrono::steady_clock::now();
  Report report;
  try {
    report = run_config(cfg);
    emit(report, cfg.format, cfg.out_path);
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return 2;
  }
  const auto t1 = std::chrono::steady_clock::now();
  const double secs = std::chrono::duration<double>(t1 - t0).count();
  std::cerr << "cone-spectra: " << report.doc["runs"].size() << " cells in " << secs << " s\n";

  if (report.analysis_errors > 0) {
    std::cerr << "cone-spectra: " << report.analysis_errors << " analysis error(s)\n";
    return 2;
  }
  if (strict_verdicts && !report.all_verdicts_pass) {
    std::cerr << "cone-spectra: verdict failure\n";
    return 3;
  }
  return 0;
}

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "curv4/cli.hpp"

namespace {

std::set<std::string> split_checks(const std::string& s) {
  std::set<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.insert(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curvature diagnostics for four-dimensional chart metrics"};
  app.require_subcommand(1);

  curv4::cli::RunConfig cfg;
  std::string builtin, metric, checks = "spectra,kperp,hypotheses", output;
  double r = 0, r1 = 0, r2 = 0, t = 0, margin = 0;
  int orientation = 1, grid = 0;
  std::size_t random = 0, workers = 0;

  auto* analyze = app.add_subcommand("analyze", "Sample a metric and run the selected checks");
  auto* o_builtin = analyze->add_option("--builtin", builtin, "Built-in model name");
  auto* o_metric = analyze->add_option("--metric", metric, "Metric config file");
  o_builtin->excludes(o_metric);
  auto* o_r = analyze->add_option("--r", r, "sphere4 radius");
  auto* o_r1 = analyze->add_option("--r1", r1, "s2xs2 first radius");
  auto* o_r2 = analyze->add_option("--r2", r2, "s2xs2 second radius");
  auto* o_t = analyze->add_option("--t", t, "fs_perturbed amplitude");
  auto* o_or = analyze->add_option("--orientation", orientation, "Orientation of a built-in model (+1 or -1)");
  auto* o_grid = analyze->add_option("--grid", grid, "Grid points per axis");
  auto* o_random = analyze->add_option("--random", random, "Number of random sample points");
  o_grid->excludes(o_random);
  analyze->add_option("--seed", cfg.seed, "Seed for sampling and plane search")->capture_default_str();
  analyze->add_option("--checks", checks, "Comma-separated: spectra,kperp,hypotheses,ak,weitzenboeck,facts,perturb")
      ->capture_default_str();
  analyze->add_option("--format", cfg.format, "json or csv")->capture_default_str();
  analyze->add_option("--output", output, "Report path (default: stdout)");
  auto* o_margin = analyze->add_option("--margin", margin, "Strictness margin for pointwise inequalities");
  analyze->add_option("--search-samples", cfg.search_samples, "Random planes per point for the search oracle")
      ->capture_default_str();
  analyze->add_option("--agreement-tol", cfg.agreement_tolerance, "Closed form vs search tolerance")
      ->capture_default_str();
  analyze->add_option("--weitzenboeck-tol", cfg.weitzenboeck_tolerance, "Weitzenboeck residual tolerance")
      ->capture_default_str();
  analyze->add_option("--workers", workers, "Worker threads (default: CURV4_WORKERS or all cores)");

  auto* models = app.add_subcommand("models", "List built-in models");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return curv4::cli::usage_error;
  }

  if (models->parsed()) {
    for (const auto& n : curv4::builtin_names()) std::cout << n << "\n";
    return 0;
  }

  if (!builtin.empty()) cfg.builtin = builtin;
  if (!metric.empty()) cfg.config_path = metric;
  if (*o_r) cfg.params["r"] = r;
  if (*o_r1) cfg.params["r1"] = r1;
  if (*o_r2) cfg.params["r2"] = r2;
  if (*o_t) cfg.params["t"] = t;
  if (*o_or) cfg.params["orientation"] = orientation;
  if (!cfg.params.empty() && !cfg.builtin) {
    std::cerr << "error: model parameters need --builtin\n";
    return curv4::cli::usage_error;
  }
  if (*o_grid) cfg.grid = grid;
  if (*o_random) cfg.random = random;
  if (*o_margin) cfg.margin = margin;
  cfg.checks = split_checks(checks);
  cfg.workers = workers;

  const curv4::cli::RunResult res = curv4::cli::run(cfg);
  if (res.exit_code == curv4::cli::usage_error) {
    std::cerr << res.summary << "\n";
    return res.exit_code;
  }
  if (output.empty()) {
    std::cout << res.report;
  } else {
    std::ofstream out(output, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write '" << output << "'\n";
      return curv4::cli::usage_error;
    }
    out << res.report;
  }
  std::cerr << res.summary << "\n";
  return res.exit_code;
}

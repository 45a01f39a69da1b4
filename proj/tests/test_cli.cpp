#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "curv4/cli.hpp"
#include "curv4/config.hpp"
#include "curv4/errors.hpp"
#include "support.hpp"

#include <json.hpp>

using namespace curv4;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const char* kFlat = R"(# flat metric on the unit cube
domain = box(0..1, 0..1, 0..1, 0..1)
g11 = 1
g22 = 1
g33 = 1
g44 = 1
)";

std::string config_error(const std::string& text) {
  try {
    parse_metric_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

cli::RunConfig builtin_run(const std::string& name, int grid, std::set<std::string> checks = {"spectra", "kperp", "hypotheses"}) {
  cli::RunConfig c;
  c.builtin = name;
  c.grid = grid;
  c.checks = std::move(checks);
  c.workers = 2;
  return c;
}

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / "curv4_test_cli";
  fs::create_directories(d);
  return d;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch_dir() / name;
  std::ofstream(p) << text;
  return p;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int shell(const std::string& cmd) {
  const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config parsing") {
  const MetricConfig flat = parse_metric_config(kFlat);
  const ModelGeometry ref = builtin("flat4");
  for (const Point& p : grid_points(Box{{0, 0, 0, 0}, {1, 1, 1, 1}}, 2)) {
    CHECK(metric_at(flat.metric, p) == metric_at(ref.metric, p));
  }
  CHECK(!flat.form);
  CHECK(std::get<Box>(flat.metric.domain()).hi[2] == 1.0);

  const MetricConfig mirrored = parse_metric_config("g11=1\ng22=1+x1^2\ng33=1\ng44=1\ng21 = x1\nw12 = 1\nw43 = 1\n");
  const Mat4 g = mirrored.metric.values({0.5, 0, 0, 0});
  CHECK(g(0, 1) == 0.5);
  CHECK(g(1, 0) == 0.5);
  REQUIRE(mirrored.form);
  CHECK(mirrored.form->values({0, 0, 0, 0})(2, 3) == -1.0);
  CHECK(std::get<Box>(mirrored.metric.domain()).lo[0] == -1.0);

  CHECK(config_error("g11=1\ng33=1\ng44=1\n").find("[g22]: missing diagonal component") != std::string::npos);
  CHECK(config_error(std::string(kFlat) + "g12 = 0\ng21 = 0\n").find("given twice") != std::string::npos);
  CHECK(config_error(std::string(kFlat) + "h12 = 0\n").find("unknown key") != std::string::npos);
  CHECK(config_error(std::string(kFlat) + "g11 = 2\n").find("duplicate") != std::string::npos);
  CHECK(config_error(std::string(kFlat) + "w11 = 2\n").find("diagonal") != std::string::npos);
  CHECK(config_error("orientation = 2\ng11=1\ng22=1\ng33=1\ng44=1\n").find("orientation") != std::string::npos);
  // Column counts from the start of the line.
  CHECK(config_error("g11 = 1 + * x2\ng22=1\ng33=1\ng44=1\n").find("(line 1) [g11]: syntax error at column 11") !=
        std::string::npos);
  CHECK(config_error("g11 = 1\ng22 = sin(\ng33=1\ng44=1\n").find("line 2") != std::string::npos);
  CHECK(config_error("domain = box(0..1, 0..1)\ng11=1\ng22=1\ng33=1\ng44=1\n").find("four ranges") !=
        std::string::npos);
  CHECK_THROWS_AS(load_metric_config("/nonexistent/curv4.cfg"), ConfigError);
}

TEST_CASE("exit codes through run()") {
  CHECK(cli::run(builtin_run("sphere4", 2)).exit_code == cli::ok);
  CHECK(cli::run(builtin_run("fubini_study", 2)).exit_code == cli::ok);
  CHECK(cli::run(builtin_run("s2xs2", 2)).exit_code == cli::verdict_false);
  CHECK(cli::run(builtin_run("flat4", 2)).exit_code == cli::verdict_false);
  CHECK(cli::run(builtin_run("nope", 2)).exit_code == cli::usage_error);
  CHECK(cli::run(builtin_run("sphere4", 2, {"bogus"})).exit_code == cli::usage_error);
  cli::RunConfig none;
  CHECK(cli::run(none).exit_code == cli::usage_error);

  // A starved search budget with zero tolerance is an oracle inconsistency.
  cli::RunConfig starved = builtin_run("fubini_study", 2);
  starved.search_samples = 2;
  starved.agreement_tolerance = 0.0;
  CHECK(cli::run(starved).exit_code == cli::inconsistent);

  // Facts and Weitzenböck on models carrying a form.
  CHECK(cli::run(builtin_run("fubini_study", 2, {"facts", "weitzenboeck", "ak"})).exit_code == cli::ok);
  CHECK(cli::run(builtin_run("sphere4", 2, {"perturb"})).exit_code == cli::usage_error);
}

TEST_CASE("errored points make verdicts false") {
  const fs::path cfg = write_file("log.cfg", "domain = box(-1..1, -1..1, -1..1, -1..1)\n"
                                             "g11 = 1 + log(x1 + 1.2)^2\ng22 = 1\ng33 = 1\ng44 = 1\n"
                                             "g12 = 0\n");
  cli::RunConfig c;
  c.config_path = cfg.string();
  c.random = 30;
  c.workers = 1;
  // Still valid everywhere on the box: no errored points.
  cli::RunResult r = cli::run(c);
  json j = json::parse(r.report);
  CHECK(j["aggregate"]["errored_points"] == 0);

  const fs::path bad = write_file("bad.cfg", "g11 = log(x1)\ng22 = 1\ng33 = 1\ng44 = 1\n");
  c.config_path = bad.string();
  r = cli::run(c);
  CHECK(r.exit_code == cli::verdict_false);
  j = json::parse(r.report);
  CHECK(j["aggregate"]["errored_points"].get<int>() > 0);
  bool saw_error = false;
  for (const auto& p : j["points"]) saw_error |= p["status"] == "error";
  CHECK(saw_error);

  const fs::path syntax = write_file("syntax.cfg", "g11 = 1 +\ng22 = 1\ng33 = 1\ng44 = 1\n");
  c.config_path = syntax.string();
  r = cli::run(c);
  CHECK(r.exit_code == cli::usage_error);
  CHECK(r.summary.find("column 10") != std::string::npos);
}

TEST_CASE("report content and determinism") {
  cli::RunConfig c = builtin_run("s2xs2", 2);
  c.seed = 42;
  const cli::RunResult a = cli::run(c);
  c.workers = 1;
  const cli::RunResult b = cli::run(c);
  CHECK(a.report == b.report);  // independent of worker count
  const json j = json::parse(a.report);
  CHECK(j["schema"] == 1);
  CHECK(j["seed"] == 42);
  CHECK(j["points"].size() == 16);
  CHECK(j["exit_code"] == 2);
  const auto& p0 = j["points"][0];
  CHECK(p0["index"] == 0);
  CHECK(std::fabs(p0["s"].get<double>() - 4.0) <= 1e-9);
  CHECK(j["aggregate"]["hypotheses"]["all_kperp_positive"] == false);
  CHECK(j["aggregate"]["oracle"]["max_kperp_disagreement"].get<double>() <= 1e-5);

  c.format = "csv";
  const cli::RunResult csv = cli::run(c);
  std::istringstream lines(csv.report);
  std::string header, row;
  std::getline(lines, header);
  CHECK(header.rfind("index,", 0) == 0);
  int rows = 0;
  while (std::getline(lines, row)) ++rows;
  CHECK(rows == 16);
}

TEST_CASE("end to end through the executable") {
  const std::string exe = CURV4_CLI_PATH;
  const fs::path dir = scratch_dir();
  CHECK(shell(exe + " analyze --builtin sphere4 --r 1 --grid 3 --checks hypotheses") == 0);
  CHECK(shell(exe + " analyze --builtin s2xs2 --grid 3 --checks hypotheses") == 2);
  CHECK(shell(exe + " analyze --builtin flat4 --grid 2") == 2);
  CHECK(shell(exe + " analyze --builtin fubini_study --grid 2 --checks spectra,kperp,hypotheses,facts") == 0);
  CHECK(shell(exe + " analyze --builtin fs_perturbed --t 0.1 --grid 2") == 0);
  CHECK(shell(exe + " analyze --builtin torus --grid 2") == 1);
  CHECK(shell(exe + " analyze --grid 2") == 1);
  CHECK(shell(exe + " analyze --builtin sphere4 --grid 2 --random 5") == 1);
  CHECK(shell(exe + " models") == 0);

  const fs::path bad = write_file("e2e_bad.cfg", "g11 = (1\ng22 = 1\ng33 = 1\ng44 = 1\n");
  const fs::path err = dir / "e2e_err.txt";
  const int status = std::system((exe + " analyze --metric " + bad.string() + " --grid 2 >/dev/null 2>" + err.string()).c_str());
  CHECK(WEXITSTATUS(status) == 1);
  CHECK(read_file(err).find("column 9") != std::string::npos);

  const fs::path flat = write_file("e2e_flat.cfg", kFlat);
  CHECK(shell(exe + " analyze --metric " + flat.string() + " --grid 2") == 2);

  const fs::path r1 = dir / "r1.json", r2 = dir / "r2.json";
  const std::string run = exe + " analyze --builtin fubini_study --random 12 --seed 7 --checks spectra,kperp,hypotheses,ak";
  CHECK(shell(run + " --output " + r1.string()) == 0);
  CHECK(shell("CURV4_WORKERS=1 " + run + " --output " + r2.string()) == 0);
  CHECK(!read_file(r1).empty());
  CHECK(read_file(r1) == read_file(r2));
}

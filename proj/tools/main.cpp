// latticepde: solve / sweep / decompose / verify front end.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "latticepde/lattice_io.hpp"
#include "latticepde/report.hpp"

namespace {

using namespace latticepde;

struct Flags {
  std::string config_path;
  int dim = 0;
  double p = 0, q = 0, a_const = 0, b_const = 0;
  std::string beta;
  int radius = 0;
  double tol = 0;
  int max_iter = 0;
  std::uint64_t seed = 0;
  std::string out, csv, csv_dir, manifest;
  double sigma = 0;
  int window = 0, max_bubbles = 0;
  double energy_floor = 0;
  int random_functions = 0, fd_trials = 0;
  bool omit_timing = false;
};

std::vector<double> parse_beta_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw ConfigError("--beta: cannot parse '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("--beta: empty list");
  return out;
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_path, "JSON run configuration; flags override its keys");
  sub->add_option("--dim", f.dim, "lattice dimension N >= 2");
  sub->add_option("--p", f.p, "exponent p");
  sub->add_option("--q", f.q, "exponent q > p");
  sub->add_option("--a-const", f.a_const, "constant coefficient a");
  sub->add_option("--b-const", f.b_const, "constant coefficient b");
  sub->add_option("--beta", f.beta, "constraint weight beta (sweep: comma-separated list)");
  sub->add_option("--radius", f.radius, "box radius R");
  sub->add_option("--tol", f.tol, "stationarity tolerance");
  sub->add_option("--max-iter", f.max_iter, "iteration budget");
  sub->add_option("--seed", f.seed, "random seed");
  sub->add_option("--out", f.out, "report path (default: stdout)");
  sub->add_flag("--omit-timing", f.omit_timing, "write null for the wall time field");
}

std::string resolve_output(const std::string& path) {
  if (path.empty()) return path;
  const char* dir = std::getenv("LATTICEPDE_OUTPUT_DIR");
  if (dir == nullptr || *dir == '\0' || std::filesystem::path(path).is_absolute()) return path;
  return (std::filesystem::path(dir) / path).string();
}

RunConfig build_config(const CLI::App& sub, const Flags& f) {
  RunConfig c;
  if (!f.config_path.empty()) {
    std::ifstream is(f.config_path);
    if (!is) throw IoError("cannot open config '" + f.config_path + "'");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config '" + f.config_path + "': " + e.what());
    }
    c = config_from_json(j);
    if (!c.subcommand.empty() && c.subcommand != sub.get_name()) {
      throw ConfigError("config subcommand '" + c.subcommand + "' does not match '" + sub.get_name() + "'");
    }
  }
  c.subcommand = sub.get_name();

  auto given = [&](const char* name) { return sub.count(name) > 0; };
  if (given("--dim")) c.dim = f.dim;
  if (given("--p")) c.p = f.p;
  if (given("--q")) c.q = f.q;
  if (given("--a-const")) c.a = CoefficientField::constant(f.a_const);
  if (given("--b-const")) c.b = CoefficientField::constant(f.b_const);
  if (given("--beta")) {
    const auto betas = parse_beta_list(f.beta);
    if (c.subcommand == "sweep") {
      c.betas = betas;
    } else {
      if (betas.size() != 1) throw ConfigError("--beta: " + c.subcommand + " takes a single value");
      c.beta = betas.front();
    }
  }
  if (given("--radius")) c.radius = f.radius;
  if (given("--tol")) c.tol = f.tol;
  if (given("--max-iter")) c.max_iter = f.max_iter;
  if (given("--seed")) c.seed = f.seed;
  if (given("--out")) c.out = f.out;
  if (given("--omit-timing")) c.omit_timing = true;
  if (sub.get_name() == "solve" && given("--csv")) c.csv = f.csv;
  if (sub.get_name() == "decompose") {
    if (given("--manifest")) c.manifest = f.manifest;
    if (given("--csv-dir")) c.csv_dir = f.csv_dir;
    if (given("--sigma")) c.sigma = f.sigma;
    if (given("--window")) c.window = f.window;
    if (given("--max-bubbles")) c.max_bubbles = f.max_bubbles;
    if (given("--energy-floor")) c.energy_floor = f.energy_floor;
  }
  if (sub.get_name() == "verify") {
    if (given("--random-functions")) c.random_functions = f.random_functions;
    if (given("--fd-trials")) c.fd_trials = f.fd_trials;
  }
  c.out = resolve_output(c.out);
  c.csv = resolve_output(c.csv);
  c.csv_dir = resolve_output(c.csv_dir);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positive solutions and Palais-Smale bubble decomposition on truncated lattice graphs"};
  app.require_subcommand(1);
  Flags f;

  auto* solve = app.add_subcommand("solve", "constrained minimization inf{J1 : J2 = 1} on B_R");
  add_common(solve, f);
  solve->add_option("--csv", f.csv, "write the minimizer as CSV");

  auto* sweep = app.add_subcommand("sweep", "solve for a list of beta values");
  add_common(sweep, f);

  auto* decompose = app.add_subcommand("decompose", "bubble decomposition of a sequence manifest");
  add_common(decompose, f);
  decompose->add_option("--manifest", f.manifest, "sequence manifest JSON");
  decompose->add_option("--csv-dir", f.csv_dir, "directory for u0 and bubble CSVs");
  decompose->add_option("--sigma", f.sigma, "vanishing threshold (0: sup|u_last|/1000)");
  decompose->add_option("--window", f.window, "pointwise-limit window radius");
  decompose->add_option("--max-bubbles", f.max_bubbles, "bubble budget");
  decompose->add_option("--energy-floor", f.energy_floor, "refuse bubbles with limit energy below this floor");

  auto* verify = app.add_subcommand("verify", "run the property-check suite");
  add_common(verify, f);
  verify->add_option("--random-functions", f.random_functions, "random functions for the norm inequalities");
  verify->add_option("--fd-trials", f.fd_trials, "finite-difference trials per (N, p, q)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_code::config_error;
  }

  CLI::App* sub = app.get_subcommands().front();
  RunConfig config;
  try {
    config = build_config(*sub, f);
    const RunReport report = run(config);
    write_report(report, config.out);
    if (report.exit_code != exit_code::success && !config.out.empty()) {
      std::cerr << "latticepde: " << report.document["status"].get<std::string>() << " (see " << config.out << ")\n";
    }
    return report.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "latticepde: " << e.what() << '\n';
    return exit_code::config_error;
  } catch (const IoError& e) {
    std::cerr << "latticepde: " << e.what() << '\n';
    return exit_code::io_error;
  } catch (const std::invalid_argument& e) {
    std::cerr << "latticepde: " << e.what() << '\n';
    return exit_code::config_error;
  }
}

#include "latticepde/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "latticepde/decomposer.hpp"
#include "latticepde/lattice_io.hpp"
#include "latticepde/minimizer.hpp"
#include "latticepde/oracles.hpp"

namespace latticepde {

using ojson = nlohmann::ordered_json;

namespace {

const std::vector<std::string> kSubcommands{"solve", "sweep", "decompose", "verify"};

ojson number(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

ojson site_json(const Site& x) { return ojson(x.coords()); }

ojson minimize_json(const MinimizeResult& r, const ProblemParams& params) {
  ojson j;
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["lambda0"] = number(r.lambda0);
  j["lambda"] = number(r.lambda);
  j["b_tilde"] = number(r.b_tilde);
  j["residual"] = number(r.residual);
  j["constraint_j2"] = number(j2(r.u0, params));
  j["max_constraint_violation"] = number(r.max_constraint_violation);
  j["positive"] = positivity_check(r.u0);
  std::size_t positive_sites = 0;
  for (double v : r.u0.values()) positive_sites += v > 0.0 ? 1 : 0;
  j["positive_sites"] = positive_sites;
  j["sup_norm"] = number(sup_norm(r.u0));
  j["diagnostics"] = r.diagnostics;
  return j;
}

ojson bounds_json(const LambdaBounds& b) { return ojson{{"lower", number(b.lower)}, {"upper", number(b.upper)}}; }

MinimizeOptions minimize_options(const RunConfig& c) {
  MinimizeOptions o;
  o.tol = c.tol;
  o.max_iter = c.max_iter;
  return o;
}

std::string bubble_file_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "bubble_%03zu.csv", i + 1);
  return buf;
}

int run_solve(const RunConfig& c, ojson& results) {
  const ProblemParams params = c.params();
  const LatticeBox box(c.dim, c.radius);
  const MinimizeResult r = minimize_constrained(params, box, std::nullopt, minimize_options(c));
  const LambdaBounds bounds = lambda_bounds(params);

  results["box"] = {{"dim", c.dim}, {"radius", c.radius}, {"sites", box.size()}};
  results["minimizer"] = minimize_json(r, params);
  results["lambda_bounds"] = bounds_json(bounds);
  results["lambda_in_bounds"] = r.lambda >= bounds.lower && r.lambda <= bounds.upper;

  // Truncation estimate from the same problem on B_{R+4}.
  const MinimizeResult wider = minimize_constrained(params, LatticeBox(c.dim, c.radius + 4), std::nullopt,
                                                    minimize_options(c));
  results["truncation"] = {{"radius", c.radius + 4},
                           {"converged", wider.converged},
                           {"lambda0", number(wider.lambda0)},
                           {"relative_difference", number(std::abs(r.lambda0 - wider.lambda0) / std::abs(wider.lambda0))}};

  if (!c.csv.empty()) {
    emit_solution_csv(r.u0, c.csv);
    results["solution_csv"] = c.csv;
  } else {
    results["solution_csv"] = nullptr;
  }
  return r.converged && wider.converged ? exit_code::success : exit_code::not_converged;
}

int run_sweep(const RunConfig& c, ojson& results) {
  const ProblemParams params = c.params();
  const std::vector<double> betas = c.betas.empty() ? std::vector<double>{c.beta} : c.betas;
  const auto rows = beta_sweep(params, betas, LatticeBox(c.dim, c.radius), minimize_options(c));
  bool all_converged = true;
  double b_min = INFINITY, b_max = 0.0;
  results["rows"] = ojson::array();
  for (const auto& row : rows) {
    ojson j;
    j["beta"] = number(row.beta);
    j["lambda_bounds"] = bounds_json(row.bounds);
    j["b_tilde_bracket"] = {number(row.b_tilde_lower), number(row.b_tilde_upper)};
    if (row.result) {
      const auto& r = *row.result;
      j["converged"] = r.converged;
      j["lambda0"] = number(r.lambda0);
      j["lambda"] = number(r.lambda);
      j["b_tilde"] = number(r.b_tilde);
      j["residual"] = number(r.residual);
      j["iterations"] = r.iterations;
      j["lambda_in_bounds"] = row.lambda_in_bounds;
      j["positive"] = positivity_check(r.u0);
      all_converged = all_converged && r.converged;
      if (r.converged) {
        b_min = std::min(b_min, r.b_tilde);
        b_max = std::max(b_max, r.b_tilde);
      }
    } else {
      j["converged"] = false;
      all_converged = false;
    }
    j["error"] = row.error.empty() ? ojson(nullptr) : ojson(row.error);
    results["rows"].push_back(std::move(j));
  }
  results["b_tilde_span"] = b_max > 0.0 && std::isfinite(b_min) ? number(b_max / b_min) : ojson(nullptr);
  return all_converged ? exit_code::success : exit_code::not_converged;
}

ojson decomposition_json(const Decomposition& dec, const ProblemParams& params, double level, const RunConfig& c) {
  ojson j;
  j["k"] = dec.k();
  j["sigma"] = number(dec.sigma);
  j["remainder_sup"] = number(dec.remainder_sup);
  j["unstable_sites"] = dec.unstable_sites;
  j["stopped_at_energy_floor"] = dec.stopped_at_energy_floor;
  j["u0"] = {{"phi", number(dec.phi_u0)}, {"sup_norm", number(sup_norm(dec.u0))}, {"window", c.window}};
  j["bubbles"] = ojson::array();
  for (std::size_t i = 0; i < dec.bubbles.size(); ++i) {
    ojson b;
    b["phi_bar"] = number(dec.phi_bar_bubbles[i]);
    b["mass_j2"] = number(dec.bubble_masses[i]);
    b["height"] = number(dec.bubble_heights[i]);
    b["limit_residual"] = number(dec.bubble_residuals[i]);
    b["centers"] = ojson::array();
    for (const Site& y : dec.center_tracks[i]) b["centers"].push_back(site_json(y));
    b["csv"] = c.csv_dir.empty() ? ojson(nullptr) : ojson((std::filesystem::path(c.csv_dir) / bubble_file_name(i)).string());
    j["bubbles"].push_back(std::move(b));
  }
  j["level"] = number(level);
  j["energy_identity_defect"] = number(energy_identity_check(dec, params, level));
  j["separation"] = dec.k() >= 1 ? ojson(separation_check(dec)) : ojson(nullptr);
  return j;
}

void write_decomposition_csvs(const Decomposition& dec, const RunConfig& c) {
  if (c.csv_dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(c.csv_dir, ec);
  if (ec) throw IoError("cannot create directory '" + c.csv_dir + "': " + ec.message());
  emit_solution_csv(dec.u0, std::filesystem::path(c.csv_dir) / "u0.csv");
  for (std::size_t i = 0; i < dec.bubbles.size(); ++i) {
    emit_solution_csv(dec.bubbles[i], std::filesystem::path(c.csv_dir) / bubble_file_name(i));
  }
}

int run_decompose(const RunConfig& c, ojson& results) {
  const ProblemParams params = c.params();
  const FunctionSequence seq = load_sequence(c.manifest);
  const double level = seq.level ? *seq.level : phi(seq.terms.back(), params);
  results["terms"] = seq.terms.size();
  results["level_source"] = seq.level ? "manifest" : "phi_of_last_term";

  ExtractOptions options;
  options.sigma = c.sigma;
  options.window = c.window;
  options.max_bubbles = c.max_bubbles;
  options.energy_floor = c.energy_floor;
  try {
    const Decomposition dec = extract_bubbles(seq, params, options);
    write_decomposition_csvs(dec, c);
    results["decomposition"] = decomposition_json(dec, params, level, c);
    results["partial"] = false;
    return exit_code::success;
  } catch (const DecompositionError& e) {
    write_decomposition_csvs(e.partial(), c);
    results["decomposition"] = decomposition_json(e.partial(), params, level, c);
    results["partial"] = true;
    results["error"] = e.what();
    return exit_code::not_converged;
  }
}

int run_verify(const RunConfig& c, ojson& results) {
  SuiteOptions options;
  options.seed = c.seed;
  options.random_functions = c.random_functions;
  options.fd_trials = c.fd_trials;
  const auto reports = run_verification_suite(options);
  bool all = true;
  results["checks"] = ojson::array();
  for (const auto& r : reports) {
    all = all && r.passed;
    results["checks"].push_back({{"name", r.name},
                                 {"passed", r.passed},
                                 {"defect", number(r.defect)},
                                 {"tolerance", number(r.tolerance)},
                                 {"trials", r.trials},
                                 {"witness", r.witness}});
  }
  results["all_passed"] = all;
  return all ? exit_code::success : exit_code::check_failed;
}

template <typename T>
T get_as(const nlohmann::json& j, const std::string& key, std::vector<std::string>& errors) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    errors.push_back("field '" + key + "' has the wrong type");
    return T{};
  }
}

}  // namespace

ProblemParams RunConfig::params() const {
  ProblemParams pp;
  pp.dim = dim;
  pp.p = p;
  pp.q = q;
  pp.a = a;
  pp.b = b;
  pp.beta = beta;
  return pp;
}

void validate(const RunConfig& c) {
  std::vector<std::string> errors;
  if (std::find(kSubcommands.begin(), kSubcommands.end(), c.subcommand) == kSubcommands.end()) {
    errors.push_back("subcommand: must be one of solve, sweep, decompose, verify (got '" + c.subcommand + "')");
  }
  try {
    c.params().validate();
  } catch (const std::invalid_argument& e) {
    errors.push_back(std::string("params: ") + e.what());
  }
  if (c.radius < 1) errors.push_back("radius: must be >= 1");
  if (!(c.tol > 0.0)) errors.push_back("tol: must be positive");
  if (c.max_iter < 0) errors.push_back("max_iter: must be >= 0");
  for (double beta : c.betas) {
    if (!std::isfinite(beta) || !(beta > 0.0)) errors.push_back("betas: every entry must be positive");
  }
  if ((c.subcommand == "solve" || c.subcommand == "sweep") && !c.a.is_constant()) {
    errors.push_back("a: the constrained problem requires a constant coefficient");
  }
  if (c.subcommand == "decompose") {
    if (c.manifest.empty()) errors.push_back("manifest: required for decompose");
    if (c.window < 0) errors.push_back("window: must be >= 0");
    if (c.max_bubbles < 0) errors.push_back("max_bubbles: must be >= 0");
    if (c.sigma < 0.0) errors.push_back("sigma: must be >= 0");
  }
  if (c.subcommand == "verify") {
    if (c.random_functions < 1) errors.push_back("random_functions: must be >= 1");
    if (c.fd_trials < 1) errors.push_back("fd_trials: must be >= 1");
  }
  if (!errors.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }
}

ojson field_to_json(const CoefficientField& f) {
  if (f.is_constant()) return ojson{{"kind", "constant"}, {"value", f.limit()}};
  ojson profile = ojson::array();
  for (const auto& [site, delta] : f.profile()) profile.push_back({{"site", site.coords()}, {"delta", delta}});
  return ojson{{"kind", "radial_limit"}, {"limit", f.limit()}, {"profile", profile}};
}

CoefficientField field_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ConfigError("coefficient field must be an object with a 'kind'");
  const auto kind = j.at("kind").get<std::string>();
  try {
    if (kind == "constant") {
      for (const auto& [key, v] : j.items()) {
        if (key != "kind" && key != "value") throw ConfigError("constant field: unknown key '" + key + "'");
      }
      return CoefficientField::constant(j.at("value").get<double>());
    }
    if (kind == "radial_limit") {
      for (const auto& [key, v] : j.items()) {
        if (key != "kind" && key != "limit" && key != "profile") throw ConfigError("radial_limit field: unknown key '" + key + "'");
      }
      std::vector<ProfileEntry> profile;
      if (j.contains("profile")) {
        for (const auto& e : j.at("profile")) {
          for (const auto& [key, v] : e.items()) {
            if (key != "site" && key != "delta") throw ConfigError("profile entry: unknown key '" + key + "'");
          }
          profile.push_back({Site(e.at("site").get<std::vector<int>>()), e.at("delta").get<double>()});
        }
      }
      return CoefficientField::radial_limit(j.at("limit").get<double>(), profile);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("coefficient field: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("coefficient field: ") + e.what());
  }
  throw ConfigError("field kind must be 'constant' or 'radial_limit' (got '" + kind + "')");
}

ojson config_to_json(const RunConfig& c) {
  ojson j;
  j["subcommand"] = c.subcommand;
  j["dim"] = c.dim;
  j["p"] = c.p;
  j["q"] = c.q;
  j["a"] = field_to_json(c.a);
  j["b"] = field_to_json(c.b);
  j["beta"] = c.beta;
  j["betas"] = c.betas;
  j["radius"] = c.radius;
  j["tol"] = c.tol;
  j["max_iter"] = c.max_iter;
  j["seed"] = c.seed;
  j["out"] = c.out;
  j["csv"] = c.csv;
  j["csv_dir"] = c.csv_dir;
  j["manifest"] = c.manifest;
  j["sigma"] = c.sigma;
  j["window"] = c.window;
  j["max_bubbles"] = c.max_bubbles;
  j["energy_floor"] = c.energy_floor ? ojson(*c.energy_floor) : ojson(nullptr);
  j["random_functions"] = c.random_functions;
  j["fd_trials"] = c.fd_trials;
  j["omit_timing"] = c.omit_timing;
  return j;
}

RunConfig config_from_json(const nlohmann::json& j, RunConfig c) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  std::vector<std::string> errors;
  for (const auto& [key, v] : j.items()) {
    if (key == "subcommand") c.subcommand = get_as<std::string>(v, key, errors);
    else if (key == "dim") c.dim = get_as<int>(v, key, errors);
    else if (key == "p") c.p = get_as<double>(v, key, errors);
    else if (key == "q") c.q = get_as<double>(v, key, errors);
    else if (key == "a" || key == "b") {
      try {
        (key == "a" ? c.a : c.b) = field_from_json(v);
      } catch (const ConfigError& e) {
        errors.push_back(key + ": " + e.what());
      }
    }
    else if (key == "beta") c.beta = get_as<double>(v, key, errors);
    else if (key == "betas") c.betas = get_as<std::vector<double>>(v, key, errors);
    else if (key == "radius") c.radius = get_as<int>(v, key, errors);
    else if (key == "tol") c.tol = get_as<double>(v, key, errors);
    else if (key == "max_iter") c.max_iter = get_as<int>(v, key, errors);
    else if (key == "seed") c.seed = get_as<std::uint64_t>(v, key, errors);
    else if (key == "out") c.out = get_as<std::string>(v, key, errors);
    else if (key == "csv") c.csv = get_as<std::string>(v, key, errors);
    else if (key == "csv_dir") c.csv_dir = get_as<std::string>(v, key, errors);
    else if (key == "manifest") c.manifest = get_as<std::string>(v, key, errors);
    else if (key == "sigma") c.sigma = get_as<double>(v, key, errors);
    else if (key == "window") c.window = get_as<int>(v, key, errors);
    else if (key == "max_bubbles") c.max_bubbles = get_as<int>(v, key, errors);
    else if (key == "energy_floor") c.energy_floor = v.is_null() ? std::nullopt : std::optional<double>(get_as<double>(v, key, errors));
    else if (key == "random_functions") c.random_functions = get_as<int>(v, key, errors);
    else if (key == "fd_trials") c.fd_trials = get_as<int>(v, key, errors);
    else if (key == "omit_timing") c.omit_timing = get_as<bool>(v, key, errors);
    else errors.push_back("unknown key '" + key + "'");
  }
  if (!errors.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  return c;
}

std::string config_fingerprint(const RunConfig& config) {
  const std::string canonical = config_to_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string RunReport::dump() const { return document.dump(2) + "\n"; }

RunReport run(const RunConfig& config) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  ojson results = ojson::object();
  report.exit_code = exit_code::success;
  std::string status = "ok";
  try {
    if (config.subcommand == "solve") report.exit_code = run_solve(config, results);
    else if (config.subcommand == "sweep") report.exit_code = run_sweep(config, results);
    else if (config.subcommand == "decompose") report.exit_code = run_decompose(config, results);
    else report.exit_code = run_verify(config, results);
  } catch (const IoError& e) {
    report.exit_code = exit_code::io_error;
    results["error"] = e.what();
  } catch (const std::invalid_argument& e) {
    report.exit_code = exit_code::config_error;
    results["error"] = e.what();
  }
  switch (report.exit_code) {
    case exit_code::success: status = "ok"; break;
    case exit_code::not_converged: status = "not_converged"; break;
    case exit_code::check_failed: status = "check_failed"; break;
    case exit_code::io_error: status = "io_error"; break;
    default: status = "config_error"; break;
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  ojson& doc = report.document;
  doc["tool"] = "latticepde";
  doc["version"] = kLibraryVersion;
  doc["fingerprint"] = config_fingerprint(config);
  doc["config"] = config_to_json(config);
  doc["status"] = status;
  doc["exit_code"] = report.exit_code;
  doc["results"] = std::move(results);
  doc["wall_time_seconds"] = config.omit_timing ? ojson(nullptr) : ojson(elapsed);
  return report;
}

void write_report(const RunReport& report, const std::string& path) {
  const std::string text = report.dump();
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os << text;
  if (!os) throw IoError("write to '" + path + "' failed");
}

std::string reemit_report(const std::string& text) { return ojson::parse(text).dump(2) + "\n"; }

}  // namespace latticepde

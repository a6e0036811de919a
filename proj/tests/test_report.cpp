#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "latticepde/decomposer.hpp"
#include "latticepde/lattice_io.hpp"
#include "latticepde/minimizer.hpp"
#include "latticepde/report.hpp"

using namespace latticepde;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("latticepde_test_report_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

RunConfig solve_config() {
  RunConfig c;
  c.subcommand = "solve";
  c.omit_timing = true;
  return c;
}

fs::path write_bubble_manifest(const fs::path& dir, int copies) {
  const auto r = minimize_constrained(ProblemParams{}, LatticeBox(2, 8));
  const LatticeFunction U = std::sqrt(r.b_tilde) * r.u0;
  std::vector<LatticeFunction> bubbles;
  CenterTracks tracks;
  for (int i = 0; i < copies; ++i) {
    bubbles.push_back(U);
    std::vector<Site> t;
    for (int n = 1; n <= 4; ++n) t.push_back(i == 0 ? Site{20 + 4 * n, 0} : Site{-20 - 4 * n, 0});
    tracks.push_back(t);
  }
  std::vector<LatticeBox> boxes;
  for (int n = 1; n <= 4; ++n) boxes.emplace_back(2, 28 + 4 * n);
  return save_sequence(synthesize_sequence(LatticeFunction(LatticeBox(2, 8)), bubbles, tracks, boxes), dir, "seq");
}

}  // namespace

TEST_CASE("validation collects every problem") {
  RunConfig c = solve_config();
  CHECK_NOTHROW(validate(c));
  c.p = 5.0;
  c.radius = 0;
  c.tol = -1.0;
  try {
    validate(c);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("params") != std::string::npos);
    CHECK(what.find("radius") != std::string::npos);
    CHECK(what.find("tol") != std::string::npos);
  }
  c = solve_config();
  c.subcommand = "plot";
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = solve_config();
  c.a = CoefficientField::radial_limit(1.0, {{Site{0, 0}, 0.5}});
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.subcommand = "decompose";
  CHECK_THROWS_AS(validate(c), ConfigError);  // no manifest
  c.manifest = "seq.json";
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("config json round trip") {
  RunConfig c = solve_config();
  c.subcommand = "decompose";
  c.a = CoefficientField::radial_limit(2.0, {{Site{0, 1}, -0.5}, {Site{3, 0}, 0.25}});
  c.b = CoefficientField::constant(3.0);
  c.betas = {0.5, 2.0};
  c.energy_floor = 0.125;
  c.manifest = "m.json";
  const auto j = config_to_json(c);
  const RunConfig back = config_from_json(nlohmann::json::parse(j.dump()));
  CHECK(config_to_json(back).dump() == j.dump());
  CHECK(config_fingerprint(back) == config_fingerprint(c));

  RunConfig other = c;
  other.seed = 8;
  CHECK(config_fingerprint(other) != config_fingerprint(c));

  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"radius": 4, "colour": "red"})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"radius": "four"})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"a": {"kind": "constant", "value": 1, "x": 2}})")),
                  ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"a": {"kind": "wavy"}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse("[1, 2]")), ConfigError);

  const RunConfig partial = config_from_json(nlohmann::json::parse(R"({"radius": 5})"), c);
  CHECK(partial.radius == 5);
  CHECK(partial.manifest == "m.json");
}

TEST_CASE("solve report") {
  const fs::path dir = scratch_dir("solve");
  RunConfig c = solve_config();
  c.csv = (dir / "u.csv").string();
  const RunReport r = run(c);
  CHECK(r.exit_code == exit_code::success);
  const auto& res = r.document["results"];
  const double lambda = res["minimizer"]["lambda"].get<double>();
  CHECK(lambda >= 0.25);
  CHECK(lambda <= 2.5);
  CHECK(res["lambda_in_bounds"].get<bool>());
  CHECK(res["truncation"]["radius"].get<int>() == 12);
  CHECK(fs::exists(dir / "u.csv"));
  CHECK(r.document["wall_time_seconds"].is_null());
  CHECK(r.document["status"] == "ok");
}

TEST_CASE("reports are deterministic and re-emit byte for byte") {
  RunConfig c = solve_config();
  c.beta = 2.0;
  c.q = 3.0;
  const std::string first = run(c).dump();
  const std::string second = run(c).dump();
  CHECK(first == second);
  CHECK(reemit_report(first) == first);

  RunConfig v;
  v.subcommand = "verify";
  v.omit_timing = true;
  v.random_functions = 50;
  v.fd_trials = 10;
  const std::string verify_text = run(v).dump();
  CHECK(run(v).dump() == verify_text);
  CHECK(reemit_report(verify_text) == verify_text);
}

TEST_CASE("sweep report") {
  RunConfig c = solve_config();
  c.subcommand = "sweep";
  c.betas = {0.1, 1.0, 10.0};
  const RunReport r = run(c);
  CHECK(r.exit_code == exit_code::success);
  const auto& rows = r.document["results"]["rows"];
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows) {
    const double bt = row["b_tilde"].get<double>();
    CHECK(bt >= row["b_tilde_bracket"][0].get<double>());
    CHECK(bt <= row["b_tilde_bracket"][1].get<double>());
  }
}

TEST_CASE("non-convergence keeps a partial report") {
  RunConfig c = solve_config();
  c.max_iter = 0;
  const RunReport r = run(c);
  CHECK(r.exit_code == exit_code::not_converged);
  CHECK(r.document["status"] == "not_converged");
  CHECK(!r.document["results"]["minimizer"]["converged"].get<bool>());
}

TEST_CASE("verify report") {
  RunConfig c;
  c.subcommand = "verify";
  c.seed = 7;
  const RunReport r = run(c);
  CHECK(r.exit_code == exit_code::success);
  CHECK(r.document["results"]["all_passed"].get<bool>());
  for (const auto& check : r.document["results"]["checks"]) CHECK(check["passed"].get<bool>());
}

TEST_CASE("decompose report") {
  const fs::path dir = scratch_dir("decompose");
  RunConfig c = solve_config();
  c.subcommand = "decompose";
  c.manifest = write_bubble_manifest(dir, 2).string();
  c.csv_dir = (dir / "out").string();
  const RunReport r = run(c);
  CHECK(r.exit_code == exit_code::success);
  const auto& dec = r.document["results"]["decomposition"];
  CHECK(dec["k"].get<int>() == 2);
  CHECK(dec["separation"].get<bool>());
  CHECK(dec["energy_identity_defect"].get<double>() <= 1e-8);
  CHECK(fs::exists(dir / "out" / "u0.csv"));
  CHECK(fs::exists(dir / "out" / "bubble_001.csv"));

  c.max_bubbles = 1;
  const RunReport partial = run(c);
  CHECK(partial.exit_code == exit_code::not_converged);
  CHECK(partial.document["results"]["partial"].get<bool>());
  CHECK(partial.document["results"]["decomposition"]["k"].get<int>() == 1);

  c.manifest = (dir / "missing.json").string();
  CHECK(run(c).exit_code == exit_code::io_error);
}

TEST_CASE("writing reports") {
  const fs::path dir = scratch_dir("write");
  const RunReport r = run(solve_config());
  write_report(r, (dir / "r.json").string());
  std::ifstream is(dir / "r.json", std::ios::binary);
  const std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  CHECK(text == r.dump());
  CHECK_THROWS_AS(write_report(r, (dir / "no" / "such" / "r.json").string()), IoError);
}

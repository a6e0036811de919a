#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "latticepde/coefficients.hpp"
#include "latticepde/functionals.hpp"

namespace latticepde {

inline constexpr const char* kLibraryVersion = "0.1.0";

namespace exit_code {
inline constexpr int success = 0;
inline constexpr int check_failed = 1;
inline constexpr int config_error = 2;
inline constexpr int not_converged = 3;
inline constexpr int io_error = 4;
}  // namespace exit_code

/// Invalid configuration; what() lists every offending field.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string subcommand;  // solve | sweep | decompose | verify

  int dim = 2;
  double p = 2.0;
  double q = 4.0;
  CoefficientField a = CoefficientField::constant(1.0);
  CoefficientField b = CoefficientField::constant(1.0);
  double beta = 1.0;
  std::vector<double> betas;

  int radius = 8;
  double tol = 1e-8;
  int max_iter = 20000;
  std::uint64_t seed = 7;

  std::string out;      // report path; empty means stdout
  std::string csv;      // solve: solution CSV
  std::string csv_dir;  // decompose: bubble CSVs
  std::string manifest; // decompose: input sequence

  double sigma = 0.0;  // 0 selects sup|u_last| / 1000
  int window = 8;
  int max_bubbles = 8;
  std::optional<double> energy_floor;

  int random_functions = 1000;
  int fd_trials = 100;

  bool omit_timing = false;

  ProblemParams params() const;
};

/// Throws ConfigError listing every invariant violation.
void validate(const RunConfig& config);

nlohmann::ordered_json field_to_json(const CoefficientField& f);
CoefficientField field_from_json(const nlohmann::json& j);

nlohmann::ordered_json config_to_json(const RunConfig& config);
/// Overlays the keys of j onto base; unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});

/// 16 hex digits of FNV-1a over the canonical config echo (which includes the seed).
std::string config_fingerprint(const RunConfig& config);

struct RunReport {
  nlohmann::ordered_json document;
  int exit_code = exit_code::success;

  std::string dump() const;
};

/// Validates, dispatches to the matching module and writes the CSV side
/// outputs named in the config. The report itself is not written.
RunReport run(const RunConfig& config);

/// Serializes and writes the report (or prints to stdout when path is empty).
void write_report(const RunReport& report, const std::string& path);

/// Parse a report and emit it again; the output is byte-identical to the input.
std::string reemit_report(const std::string& text);

}  // namespace latticepde

#pragma once

// Scenario configuration, execution and machine-readable reports for the
// twistor-verify runner.

#include "tz/corpus.hpp"
#include "tz/twistor.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace tz::scenario {

inline constexpr const char* kConfigSchema = "twistor-verify/config/1";
inline constexpr const char* kReportSchema = "twistor-verify/report/1";
inline constexpr const char* kCorpusSchema = "twistor-verify/corpus/1";
inline constexpr const char* kToolName = "twistor-verify";
inline constexpr const char* kToolVersion = "1.0.0";

using json = nlohmann::ordered_json;

enum class Check { Superminimal, Lagrangian, MinimalL, Converse, Lie };

const char* to_string(Check c);
Check check_from_string(const std::string& name);
/// Fixed execution order.
const std::vector<Check>& all_checks();

struct Tolerances {
  double vertical = 1e-6;
  double indicatrix = 1e-6;
  double holonomy = 1e-5;
  double lagrangian = 1e-5;
  double mean_curvature = 1e-3;
  double containment = 1e-6;
  double finite_difference = 1e-4;
  double lie = 1e-13;

  /// key=value override; throws ConfigError on unknown keys or values below
  /// machine epsilon.
  void set(const std::string& key, double value);
  json to_json() const;
};

struct SurfaceSpec {
  std::string builtin;                   // empty when given by formulas
  std::array<std::string, 4> formulas{};
  surface::Domain domain;
  surface::Grid grid;
};

struct ScenarioConfig {
  std::optional<geom::ModelKind> model;  // required with formulas; checked against a built-in
  std::optional<SurfaceSpec> surface;    // not needed when only lie runs
  std::vector<double> lambdas{0.5, 1.0, 2.0};
  std::vector<twistor::Sign> signs{twistor::Sign::Plus, twistor::Sign::Minus};
  int n_theta = 16;
  Tolerances tolerances;
  std::vector<Check> checks;

  json to_json() const;
};

/// Config for a built-in surface with the given checks.
ScenarioConfig builtin_config(const std::string& name, std::vector<Check> checks);

ScenarioConfig parse_config(const nlohmann::json& doc);
ScenarioConfig load_config(const std::string& path);
/// Invariants: λ > 0, grids ≥ 4×4, n_θ ≥ 4, a surface for surface checks, and
/// formulas that parse and evaluate on the grid. Throws ConfigError / ExprError.
void validate(const ScenarioConfig& config);
/// Resolves the surface of a validated config.
surface::ImmersedSurface make_surface(const ScenarioConfig& config);

struct Defect {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  json argmax;  // sample coordinates, or null
};

enum class Status { Pass, Fail, Error };
const char* to_string(Status s);

struct CheckResult {
  Check check;
  Status status = Status::Error;
  std::vector<Defect> defects;
  std::string error;       // error kind and message when status is Error
  std::string detail;
  double seconds = 0.0;
};

struct Report {
  ScenarioConfig config;
  std::vector<CheckResult> checks;
  double seconds = 0.0;

  bool all_pass() const;
  json to_json(bool timing = true) const;
  /// One row per defect: check, defect, value, tolerance, pass, argmax.
  std::string to_csv() const;
};

/// Runs the requested checks in fixed order. Execution errors are recorded
/// per check; configuration errors throw before anything runs.
Report run_scenario(const ScenarioConfig& config);

/// 0 all pass, 1 any failure or execution error.
int exit_code(const Report& report);

json corpus_table();

}  // namespace tz::scenario

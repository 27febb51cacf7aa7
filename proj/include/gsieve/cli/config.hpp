#pragma once

// Scenario configuration for the command-line front end. Configs are JSON
// documents; every section is optional at parse time and each command checks
// for the parts it needs.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gsieve/gaussian_core.hpp"
#include "gsieve/lindblad_model.hpp"

namespace gsieve::cli {

// Malformed or out-of-range configuration; `field` is a dotted path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// A time given either directly or as a number of oscillator periods 2*pi/omega.
struct TimeValue {
  double value = 0.0;
  bool in_periods = false;

  double resolve(double omega) const;
  bool operator==(const TimeValue&) const = default;
};

struct ParamSpec {
  double lambda = 0.0;
  double d_qq = 0.0;
  double d_pp = 0.0;
  double d_pq = 0.0;
  bool enforce_positivity = true;
  bool operator==(const ParamSpec&) const = default;
};

struct TimeGridSpec {
  std::optional<TimeValue> t_max;
  int steps = 0;
  std::vector<TimeValue> times;  // explicit list; used when t_max is absent
  bool operator==(const TimeGridSpec&) const = default;
};

struct SieveSpec {
  std::optional<TimeValue> eval_time;  // empty means auto = 10/lambda
  int theta_samples = 360;
  int aleph_samples = 201;
  bool operator==(const SieveSpec&) const = default;
};

enum class OutputFormat { csv, json };

struct OutputSpec {
  std::string path;  // empty or "-" means stdout
  OutputFormat format = OutputFormat::csv;
  bool operator==(const OutputSpec&) const = default;
};

// One scanned parameter: lambda, omega, d_qq, d_pp or d_pq.
struct ScanAxis {
  std::string name;
  double from = 0.0;
  double to = 0.0;
  int points = 1;
  bool log_spacing = false;
  std::vector<double> values;  // explicit list overrides from/to/points

  std::vector<double> samples() const;
  bool operator==(const ScanAxis&) const = default;
};

struct ScenarioConfig {
  PhysicalConstants constants;
  std::optional<ParamSpec> params;
  std::optional<GeneratorCoefficients> coefficients;
  std::optional<ShapeDecomposition> shape;
  std::optional<CovarianceMatrix> covariance;
  std::optional<TimeGridSpec> time_grid;
  SieveSpec sieve;
  std::vector<ScanAxis> scan;
  OutputSpec output;

  bool operator==(const ScenarioConfig& o) const;
};

// Command-line overrides; unset fields leave the config untouched.
struct Overrides {
  std::optional<double> lambda, omega, d_qq, d_pp, d_pq, t_max;
  std::optional<std::complex<double>> a1, a2, b1, b2;
  std::optional<int> steps;
  std::optional<std::string> eval_time;  // number or "auto"
  std::optional<std::string> out;
  std::optional<std::string> format;
};

ScenarioConfig parse_config(const nlohmann::json& doc);
ScenarioConfig load_config_file(const std::string& path);
void apply_overrides(ScenarioConfig& config, const Overrides& overrides);

nlohmann::ordered_json to_json(const ScenarioConfig& config);

// Field-range checks that only make sense once overrides are applied.
void validate_config(const ScenarioConfig& config);

// Physics validation errors (gsieve::Error) propagate from these; missing
// sections raise ConfigError.
LindbladParams build_params(const ScenarioConfig& config);
CovarianceMatrix build_initial_state(const ScenarioConfig& config);
std::vector<double> build_times(const ScenarioConfig& config);
double resolve_eval_time(const ScenarioConfig& config, const LindbladParams& lp);

}  // namespace gsieve::cli

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rwave/initial_data.hpp"
#include "rwave/weights.hpp"

namespace rwave {

enum class RunMode { ode_blowup, baseline_compare, shock, certify_weights, sweep };

std::string run_mode_name(RunMode m);

struct GridConfig {
  int dimension = 1;
  int points_per_axis = 0;
  double domain_length = 0.0;
};

enum class DataFamily { bump, homogeneous, shock_bump, snapshot };

struct DataConfig {
  DataFamily family = DataFamily::bump;
  BumpProfile profile = BumpProfile::polynomial;
  bool profile_explicit = false;  // false: resolved from the accuracy order
  double kappa = 1.0;
  double lambda = 4.0;
  double spatial_amplitude = 0.05;
  double spatial_radius = 1.0;
  double delta = 1.0;             // homogeneous
  double epsilon_target = 0.01;   // shock_bump
  std::string psi0_path;          // snapshot
  std::vector<std::string> psi_paths;
  std::string phi0_path;
};

struct IntegratorConfig {
  double cfl = 0.4;
  int accuracy_order = 0;  // 0: resolved to 4 in 1D, 2 otherwise
  double ifact_stop = 1e-2;
  double mu_floor = 0.05;
  double t_max = 0.0;  // 0: automatic horizon (2/a_star; 2.0 for shock runs)
  int k_max = 0;       // 0: resolved to 5 in 1D, 2 otherwise
  int friction_k = 0;
  double u_blowup = 1e3;
};

struct OutputConfig {
  std::string directory = "out";
  std::vector<double> snapshot_times;
  std::uint64_t seed = 0;
};

struct CertifyConfig {
  double y_max = 1e4;
  int samples = 2000;
};

struct SweepConfig {
  std::string parameter;        // dotted path into the nested run config
  std::vector<double> values;
};

struct RunConfig {
  int schema_version = 1;
  RunMode mode = RunMode::ode_blowup;
  WeightFunction weight = WeightFunction::power_shifted(1);
  GridConfig grid;
  DataConfig data;
  IntegratorConfig integrator;
  OutputConfig output;
  CertifyConfig certify;
  std::optional<SweepConfig> sweep;
  std::shared_ptr<RunConfig> sweep_run;  // nested config for sweep mode
};

/// Aggregated validation failure: every issue found in one pass.
struct ConfigError : std::runtime_error {
  explicit ConfigError(std::vector<std::string> issues);
  std::vector<std::string> issues;
};

/// Parses and validates the JSON run configuration; unknown keys and
/// out-of-range values are rejected with an itemized error list. All
/// defaults are resolved, so the returned config is fully explicit.
RunConfig parse_config(const std::string& text);

RunConfig parse_config_file(const std::string& path);

/// Serialized resolved configuration (every applied default appears
/// explicitly); embedded verbatim in the run manifest.
std::string resolved_config_json(const RunConfig& config);

}  // namespace rwave

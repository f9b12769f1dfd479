#include "rwave/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace rwave {

using nlohmann::json;

std::string run_mode_name(RunMode m) {
  switch (m) {
    case RunMode::ode_blowup: return "ode_blowup";
    case RunMode::baseline_compare: return "baseline_compare";
    case RunMode::shock: return "shock";
    case RunMode::certify_weights: return "certify_weights";
    case RunMode::sweep: return "sweep";
  }
  return "unknown";
}

ConfigError::ConfigError(std::vector<std::string> issues_in)
    : std::runtime_error([&] {
        std::string msg = "invalid configuration:";
        for (const auto& i : issues_in) msg += "\n  - " + i;
        return msg;
      }()),
      issues(std::move(issues_in)) {}

namespace {

struct Validator {
  std::vector<std::string> issues;

  void fail(const std::string& msg) { issues.push_back(msg); }

  void check_keys(const json& obj, const std::string& where,
                  std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      bool known = false;
      for (const char* k : allowed)
        if (it.key() == k) known = true;
      if (!known) fail("unknown key '" + it.key() + "' in " + where);
    }
  }

  template <typename T>
  bool get(const json& obj, const char* key, T& out, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) return false;
    try {
      out = it->get<T>();
      return true;
    } catch (const std::exception&) {
      fail(std::string("wrong type for '") + key + "' in " + where);
      return false;
    }
  }
};

RunMode parse_mode(const std::string& s, Validator& v) {
  if (s == "ode_blowup") return RunMode::ode_blowup;
  if (s == "baseline_compare") return RunMode::baseline_compare;
  if (s == "shock") return RunMode::shock;
  if (s == "certify_weights") return RunMode::certify_weights;
  if (s == "sweep") return RunMode::sweep;
  v.fail("unknown mode '" + s + "'");
  return RunMode::ode_blowup;
}

WeightFunction parse_weight(const json& obj, Validator& v) {
  v.check_keys(obj, "weight", {"family", "M", "alpha_hint"});
  std::string family = "power_shifted";
  v.get(obj, "family", family, "weight");
  int M = 1;
  v.get(obj, "M", M, "weight");
  double alpha = 1.0;
  v.get(obj, "alpha_hint", alpha, "weight");
  if (M < 1 || M > 8) v.fail("weight.M must lie in [1, 8]");
  if (!(alpha > 0.0)) v.fail("weight.alpha_hint must be positive");
  if (M < 1) M = 1;
  if (family == "power_inverse") return WeightFunction::power_inverse(M, alpha);
  if (family == "power_shifted") return WeightFunction::power_shifted(M, alpha);
  if (family == "exponential") return WeightFunction::exponential(alpha);
  v.fail("unknown weight.family '" + family + "'");
  return WeightFunction::power_shifted(1, alpha);
}

GridConfig parse_grid(const json& obj, Validator& v) {
  v.check_keys(obj, "grid", {"dimension", "points_per_axis", "domain_length"});
  GridConfig g;
  if (!v.get(obj, "dimension", g.dimension, "grid")) v.fail("grid.dimension is required");
  if (!v.get(obj, "points_per_axis", g.points_per_axis, "grid"))
    v.fail("grid.points_per_axis is required");
  if (!v.get(obj, "domain_length", g.domain_length, "grid"))
    v.fail("grid.domain_length is required");
  if (g.dimension < 1 || g.dimension > 3) v.fail("grid.dimension must be 1, 2 or 3");
  if (g.points_per_axis < 8 || g.points_per_axis > 4096)
    v.fail("grid.points_per_axis must lie in [8, 4096]");
  if (!(g.domain_length > 0.0)) v.fail("grid.domain_length must be positive");
  return g;
}

DataConfig parse_data(const json& obj, Validator& v) {
  v.check_keys(obj, "data",
               {"family", "profile", "kappa", "lambda", "spatial_amplitude",
                "spatial_radius", "delta", "epsilon_target", "psi0_path", "psi_paths",
                "phi0_path"});
  DataConfig d;
  std::string family = "bump";
  v.get(obj, "family", family, "data");
  if (family == "bump")
    d.family = DataFamily::bump;
  else if (family == "homogeneous")
    d.family = DataFamily::homogeneous;
  else if (family == "shock_bump")
    d.family = DataFamily::shock_bump;
  else if (family == "snapshot")
    d.family = DataFamily::snapshot;
  else
    v.fail("unknown data.family '" + family + "'");

  std::string profile;
  if (v.get(obj, "profile", profile, "data")) {
    d.profile_explicit = true;
    try {
      d.profile = bump_profile_from_name(profile);
    } catch (const std::exception& e) {
      v.fail(e.what());
    }
  }
  v.get(obj, "kappa", d.kappa, "data");
  v.get(obj, "lambda", d.lambda, "data");
  v.get(obj, "spatial_amplitude", d.spatial_amplitude, "data");
  v.get(obj, "spatial_radius", d.spatial_radius, "data");
  v.get(obj, "delta", d.delta, "data");
  v.get(obj, "epsilon_target", d.epsilon_target, "data");
  v.get(obj, "psi0_path", d.psi0_path, "data");
  v.get(obj, "psi_paths", d.psi_paths, "data");
  v.get(obj, "phi0_path", d.phi0_path, "data");

  if (d.family == DataFamily::bump && !(d.lambda >= 1.0))
    v.fail("data.lambda must be >= 1");
  if (d.family == DataFamily::bump && !(d.spatial_radius > 0.0))
    v.fail("data.spatial_radius must be positive");
  if (d.family == DataFamily::homogeneous && !(d.delta > -0.25))
    v.fail("data.delta must exceed -1/4");
  if (d.family == DataFamily::shock_bump &&
      !(d.epsilon_target > 0.0 && d.epsilon_target < 0.25))
    v.fail("data.epsilon_target must lie in (0, 1/4)");
  if (d.family == DataFamily::snapshot && d.psi0_path.empty())
    v.fail("data.psi0_path is required for snapshot data");
  return d;
}

IntegratorConfig parse_integrator(const json& obj, Validator& v) {
  v.check_keys(obj, "integrator",
               {"cfl", "accuracy_order", "ifact_stop", "mu_floor", "t_max", "k_max",
                "friction_k", "u_blowup"});
  IntegratorConfig c;
  v.get(obj, "cfl", c.cfl, "integrator");
  v.get(obj, "accuracy_order", c.accuracy_order, "integrator");
  v.get(obj, "ifact_stop", c.ifact_stop, "integrator");
  v.get(obj, "mu_floor", c.mu_floor, "integrator");
  v.get(obj, "t_max", c.t_max, "integrator");
  v.get(obj, "k_max", c.k_max, "integrator");
  v.get(obj, "friction_k", c.friction_k, "integrator");
  v.get(obj, "u_blowup", c.u_blowup, "integrator");
  if (!(c.cfl > 0.0 && c.cfl <= 1.0)) v.fail("integrator.cfl must lie in (0, 1]");
  if (c.accuracy_order != 0 && c.accuracy_order != 2 && c.accuracy_order != 4)
    v.fail("integrator.accuracy_order must be 2 or 4");
  if (!(c.ifact_stop > 0.0 && c.ifact_stop <= 0.5))
    v.fail("integrator.ifact_stop must lie in (0, 0.5]");
  if (!(c.mu_floor > 0.0 && c.mu_floor <= 0.5))
    v.fail("integrator.mu_floor must lie in (0, 0.5]");
  if (c.t_max < 0.0) v.fail("integrator.t_max must be nonnegative");
  if (c.k_max != 0 && (c.k_max < 2 || c.k_max > 5))
    v.fail("integrator.k_max must lie in [2, 5]");
  if (c.friction_k < 0 || c.friction_k > 2)
    v.fail("integrator.friction_k must lie in [0, 2]");
  if (!(c.u_blowup > 1.0)) v.fail("integrator.u_blowup must exceed 1");
  return c;
}

OutputConfig parse_output(const json& obj, Validator& v) {
  v.check_keys(obj, "output", {"directory", "snapshot_times", "seed"});
  OutputConfig o;
  v.get(obj, "directory", o.directory, "output");
  v.get(obj, "snapshot_times", o.snapshot_times, "output");
  v.get(obj, "seed", o.seed, "output");
  for (double t : o.snapshot_times)
    if (t < 0.0) v.fail("output.snapshot_times must be nonnegative");
  return o;
}

CertifyConfig parse_certify(const json& obj, Validator& v) {
  v.check_keys(obj, "certify", {"y_max", "samples"});
  CertifyConfig c;
  v.get(obj, "y_max", c.y_max, "certify");
  v.get(obj, "samples", c.samples, "certify");
  if (!(c.y_max >= 2.0)) v.fail("certify.y_max must be >= 2");
  if (c.samples < 100) v.fail("certify.samples must be >= 100");
  return c;
}

RunConfig parse_config_json(const json& root, Validator& v);

SweepConfig parse_sweep(const json& obj, Validator& v) {
  v.check_keys(obj, "sweep", {"parameter", "values"});
  SweepConfig s;
  if (!v.get(obj, "parameter", s.parameter, "sweep"))
    v.fail("sweep.parameter is required");
  if (!v.get(obj, "values", s.values, "sweep")) v.fail("sweep.values is required");
  if (s.values.empty()) v.fail("sweep.values must not be empty");
  static const char* allowed[] = {"data.lambda", "data.kappa", "data.delta",
                                  "data.epsilon_target", "weight.M",
                                  "grid.points_per_axis"};
  bool ok = false;
  for (const char* a : allowed)
    if (s.parameter == a) ok = true;
  if (!ok)
    v.fail("sweep.parameter '" + s.parameter +
           "' is not sweepable (use data.lambda, data.kappa, data.delta, "
           "data.epsilon_target, weight.M or grid.points_per_axis)");
  return s;
}

RunConfig parse_config_json(const json& root, Validator& v) {
  RunConfig cfg;
  if (!root.is_object()) {
    v.fail("top-level configuration must be an object");
    return cfg;
  }
  v.check_keys(root, "the top level",
               {"schema_version", "mode", "weight", "grid", "data", "integrator",
                "output", "certify", "sweep", "run"});

  if (!v.get(root, "schema_version", cfg.schema_version, "the top level"))
    v.fail("schema_version is required");
  else if (cfg.schema_version != 1)
    v.fail("unsupported schema_version (expected 1)");

  std::string mode;
  if (!v.get(root, "mode", mode, "the top level"))
    v.fail("mode is required");
  else
    cfg.mode = parse_mode(mode, v);

  if (root.contains("weight")) cfg.weight = parse_weight(root.at("weight"), v);
  if (root.contains("data")) cfg.data = parse_data(root.at("data"), v);
  if (root.contains("integrator"))
    cfg.integrator = parse_integrator(root.at("integrator"), v);
  if (root.contains("output")) cfg.output = parse_output(root.at("output"), v);
  if (root.contains("certify")) cfg.certify = parse_certify(root.at("certify"), v);

  const bool needs_grid = cfg.mode != RunMode::certify_weights && cfg.mode != RunMode::sweep;
  if (root.contains("grid"))
    cfg.grid = parse_grid(root.at("grid"), v);
  else if (needs_grid)
    v.fail("grid is required for this mode");

  if (cfg.mode == RunMode::sweep) {
    if (!root.contains("sweep"))
      v.fail("sweep mode requires a 'sweep' section");
    else
      cfg.sweep = parse_sweep(root.at("sweep"), v);
    if (!root.contains("run")) {
      v.fail("sweep mode requires a nested 'run' configuration");
    } else {
      RunConfig nested = parse_config_json(root.at("run"), v);
      if (nested.mode == RunMode::sweep) v.fail("sweep configs cannot nest");
      cfg.sweep_run = std::make_shared<RunConfig>(std::move(nested));
    }
  } else if (root.contains("sweep") || root.contains("run")) {
    v.fail("'sweep'/'run' sections are only valid in sweep mode");
  }

  // Resolve the order- and dimension-dependent defaults so the config is
  // fully explicit from here on.
  if (cfg.integrator.accuracy_order == 0)
    cfg.integrator.accuracy_order = cfg.grid.dimension == 1 ? 4 : 2;
  if (cfg.integrator.k_max == 0) cfg.integrator.k_max = cfg.grid.dimension == 1 ? 5 : 2;
  if (!cfg.data.profile_explicit)
    cfg.data.profile = cfg.integrator.accuracy_order == 4 ? BumpProfile::gaussian
                                                          : BumpProfile::polynomial;

  // Shock runs live on the unit u-interval.
  if (cfg.mode == RunMode::shock) {
    if (cfg.grid.dimension != 1) v.fail("shock mode requires grid.dimension = 1");
    if (root.contains("grid") && std::fabs(cfg.grid.domain_length - 1.0) > 1e-12)
      v.fail("shock mode requires grid.domain_length = 1");
    if (cfg.data.family != DataFamily::shock_bump)
      v.fail("shock mode requires data.family = shock_bump");
  } else if (cfg.data.family == DataFamily::shock_bump) {
    v.fail("data.family shock_bump is only valid in shock mode");
  }
  return cfg;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError({std::string("JSON parse error: ") + e.what()});
  }
  Validator v;
  RunConfig cfg = parse_config_json(root, v);
  if (!v.issues.empty()) throw ConfigError(std::move(v.issues));
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file: " + path});
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace {

json config_to_json(const RunConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  j["mode"] = run_mode_name(c.mode);
  j["weight"] = {{"family", c.weight.family == WeightFamily::power_inverse ? "power_inverse"
                            : c.weight.family == WeightFamily::power_shifted
                                ? "power_shifted"
                                : "exponential"},
                 {"M", c.weight.exponent},
                 {"alpha_hint", c.weight.alpha_hint}};
  j["grid"] = {{"dimension", c.grid.dimension},
               {"points_per_axis", c.grid.points_per_axis},
               {"domain_length", c.grid.domain_length}};
  json data = {{"profile", bump_profile_name(c.data.profile)}};
  switch (c.data.family) {
    case DataFamily::bump:
      data["family"] = "bump";
      data["kappa"] = c.data.kappa;
      data["lambda"] = c.data.lambda;
      data["spatial_amplitude"] = c.data.spatial_amplitude;
      data["spatial_radius"] = c.data.spatial_radius;
      break;
    case DataFamily::homogeneous:
      data["family"] = "homogeneous";
      data["delta"] = c.data.delta;
      break;
    case DataFamily::shock_bump:
      data["family"] = "shock_bump";
      data["epsilon_target"] = c.data.epsilon_target;
      break;
    case DataFamily::snapshot:
      data["family"] = "snapshot";
      data["psi0_path"] = c.data.psi0_path;
      data["psi_paths"] = c.data.psi_paths;
      data["phi0_path"] = c.data.phi0_path;
      break;
  }
  j["data"] = data;
  j["integrator"] = {{"cfl", c.integrator.cfl},
                     {"accuracy_order", c.integrator.accuracy_order},
                     {"ifact_stop", c.integrator.ifact_stop},
                     {"mu_floor", c.integrator.mu_floor},
                     {"t_max", c.integrator.t_max},
                     {"k_max", c.integrator.k_max},
                     {"friction_k", c.integrator.friction_k},
                     {"u_blowup", c.integrator.u_blowup}};
  j["output"] = {{"directory", c.output.directory},
                 {"snapshot_times", c.output.snapshot_times},
                 {"seed", c.output.seed}};
  j["certify"] = {{"y_max", c.certify.y_max}, {"samples", c.certify.samples}};
  if (c.sweep) {
    j["sweep"] = {{"parameter", c.sweep->parameter}, {"values", c.sweep->values}};
    if (c.sweep_run) j["run"] = config_to_json(*c.sweep_run);
  }
  return j;
}

}  // namespace

std::string resolved_config_json(const RunConfig& config) {
  return config_to_json(config).dump(2);
}

}  // namespace rwave

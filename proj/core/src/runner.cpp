#include "rwave/runner.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <thread>

#include <nlohmann/json.hpp>

#include "rwave/evolve.hpp"
#include "rwave/io.hpp"
#include "rwave/shock.hpp"

namespace rwave {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

Grid build_grid(const RunConfig& cfg) {
  return make_grid(cfg.grid.dimension, cfg.grid.points_per_axis, cfg.grid.domain_length);
}

std::shared_ptr<const InitialData> build_data(const RunConfig& cfg, const Grid& grid) {
  switch (cfg.data.family) {
    case DataFamily::bump: {
      BumpDataOptions opts;
      opts.spatial_amplitude = cfg.data.spatial_amplitude;
      opts.spatial_radius = cfg.data.spatial_radius;
      opts.measure_order = cfg.integrator.accuracy_order;
      return std::make_shared<InitialData>(
          make_bump_data(cfg.data.profile, cfg.data.kappa, cfg.data.lambda, grid, opts));
    }
    case DataFamily::homogeneous:
      return std::make_shared<InitialData>(homogeneous_data(cfg.data.delta, grid));
    case DataFamily::snapshot: {
      ScalarField psi0 = read_field_csv(cfg.data.psi0_path);
      std::vector<ScalarField> psi;
      for (const auto& p : cfg.data.psi_paths) psi.push_back(read_field_csv(p));
      ScalarField phi0 = cfg.data.phi0_path.empty()
                             ? ScalarField(psi0.grid(), 0.0)
                             : read_field_csv(cfg.data.phi0_path);
      return std::make_shared<InitialData>(data_from_fields(
          std::move(psi0), std::move(psi), std::move(phi0), cfg.integrator.accuracy_order));
    }
    case DataFamily::shock_bump:
      throw std::invalid_argument("shock data is built by the shock runner");
  }
  throw std::logic_error("unreachable data family");
}

// Periodic evolution matches the whole-space problem while the support plus
// the causal cone stays inside the box; the wave speed is bounded by the
// weight at the lowest ratio the run can reach.
void check_support_margin(const RunConfig& cfg, const InitialData& data, double t_max) {
  if (!data.compactly_supported) return;
  double min_psi0 = data.psi0_init.size() ? data.psi0_init[0] : 0.0;
  for (double v : data.psi0_init.values()) min_psi0 = std::min(min_psi0, v);
  const double y_low = std::max(std::min(0.0, min_psi0) - data.params.eps_ring, -0.449);
  const double speed = std::sqrt(eval_weight(cfg.weight, y_low));
  const double required = 2.0 * data.support_radius + 2.0 * speed * t_max;
  if (cfg.grid.domain_length < required)
    throw std::invalid_argument(
        "domain too small: support plus causal margin needs domain_length >= " +
        std::to_string(required));
}

json params_json(const DataSizeParams& p) {
  return json{{"eps_ring", p.eps_ring},
              {"a_ring", p.a_ring},
              {"a_star", p.a_star},
              {"ratio_eps_times_a", p.ratio_eps_times_a},
              {"ratio_eps_over_astar", p.ratio_eps_over_astar}};
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
}

void write_manifest(const std::filesystem::path& dir, const RunConfig& cfg,
                    const json& extra) {
  json manifest;
  manifest["versions"] = {{"rwave", kVersion},
                          {"config_schema", 1},
                          {"diagnostics_schema", "rwave.diagnostics.v1"},
                          {"field_schema", "rwave.field.v1"},
                          {"shock_schema", "rwave.shock.v1"}};
  manifest["resolved_config"] = json::parse(resolved_config_json(cfg));
  for (auto it = extra.begin(); it != extra.end(); ++it) manifest[it.key()] = it.value();
  write_json(dir / "manifest.json", manifest);
}

struct OdeRunResult {
  json summary;
  bool ok = false;
  Trajectory traj;
};

json trajectory_summary(const Trajectory& traj, double ifact_stop) {
  std::int64_t implication = 0, implication_soft = 0, friction_sign = 0;
  double q0 = traj.records.empty() ? 0.0 : traj.records.front().controlling_q;
  double q_max = 0.0, residual_max = 0.0, min_ratio = 0.0;
  double drift_max = 0.0, law_max = 0.0, grad_drift_max = 0.0;
  for (const auto& r : traj.records) {
    implication += r.implication_violations;
    implication_soft += r.implication_violations_soft;
    q_max = std::max(q_max, r.controlling_q);
    residual_max = std::max(residual_max, r.energy_identity_residual);
    min_ratio = std::min(min_ratio, r.min_ratio);
    drift_max = std::max(drift_max, r.sup_psi0_drift);
    law_max = std::max(law_max, r.ifact_law_error);
    grad_drift_max = std::max(grad_drift_max, r.ifact_gradient_drift);
  }
  if (!traj.records.empty())
    friction_sign = traj.records.back().friction_sign_violations;

  json s;
  s["status"] = run_status_name(traj.status);
  if (!traj.breach.empty()) s["breach"] = traj.breach;
  s["steps"] = traj.records.size();
  s["t_est"] = traj.t_est;
  s["t_ode"] = traj.t_ode;
  s["ifact_stop"] = ifact_stop;
  if (!traj.records.empty()) {
    s["t_final"] = traj.records.back().time;
    s["ifact_star_final"] = traj.records.back().ifact_star;
    s["sup_dtphi_final"] = traj.records.back().sup_dtphi;
    s["friction_accumulated"] = traj.records.back().friction_accumulated;
    s["indicator_friction_accumulated"] =
        traj.records.back().indicator_friction_accumulated;
  }
  s["q_initial"] = q0;
  s["q_max"] = q_max;
  s["q_ratio_max"] = q0 > 0.0 ? q_max / q0 : 0.0;
  s["max_energy_identity_residual"] = residual_max;
  s["min_ratio"] = min_ratio;
  s["sup_psi0_drift_max"] = drift_max;
  s["ifact_law_error_max"] = law_max;
  s["ifact_gradient_drift_max"] = grad_drift_max;
  s["violations"] = {{"implication", implication},
                     {"implication_soft", implication_soft},
                     {"friction_sign", friction_sign}};
  return s;
}

bool trajectory_ok(const Trajectory& traj) {
  if (traj.status == RunStatus::invariant_breach || traj.status == RunStatus::step_limit)
    return false;
  std::int64_t implication = 0;
  for (const auto& r : traj.records) implication += r.implication_violations;
  const std::int64_t friction_sign =
      traj.records.empty() ? 0 : traj.records.back().friction_sign_violations;
  return implication == 0 && friction_sign == 0;
}

OdeRunResult run_ode_mode(const RunConfig& cfg, const std::filesystem::path& dir,
                          bool quiet) {
  const Grid grid = build_grid(cfg);
  auto data = build_data(cfg, grid);

  RunOptions opts;
  opts.cfl = cfg.integrator.cfl;
  opts.accuracy_order = cfg.integrator.accuracy_order;
  opts.ifact_stop = cfg.integrator.ifact_stop;
  opts.t_max = cfg.integrator.t_max;
  opts.k_max = cfg.integrator.k_max;
  opts.friction_k = cfg.integrator.friction_k;
  opts.snapshot_times = cfg.output.snapshot_times;

  const double horizon = opts.t_max > 0.0
                             ? opts.t_max
                             : (data->params.a_star > 0.0 ? 2.0 / data->params.a_star : 0.0);
  check_support_margin(cfg, *data, horizon);

  OdeRunResult result;
  result.traj = run_regularized(data, cfg.weight, opts);

  write_manifest(dir, cfg, json{{"data_params", params_json(data->params)}});
  write_diagnostics_csv(dir / "diagnostics.csv", result.traj.records);
  if (!result.traj.snapshots.empty()) {
    std::filesystem::create_directories(dir / "snapshots");
    json index = json::array();
    for (std::size_t i = 0; i < result.traj.snapshots.size(); ++i) {
      const RenormalizedState& s = result.traj.snapshots[i];
      const std::string tag = std::to_string(i);
      write_field_csv(dir / "snapshots" / ("psi0_" + tag + ".csv"), s.psi0);
      write_field_csv(dir / "snapshots" / ("ifact_" + tag + ".csv"), s.ifact);
      for (int a = 0; a < s.dimension(); ++a)
        write_field_csv(dir / "snapshots" /
                            ("psi" + std::to_string(a + 1) + "_" + tag + ".csv"),
                        s.psi[static_cast<std::size_t>(a)]);
      index.push_back({{"index", i}, {"time", s.time}});
    }
    write_json(dir / "snapshots" / "index.json", index);
  }

  result.summary = trajectory_summary(result.traj, opts.ifact_stop);
  result.ok = trajectory_ok(result.traj);
  if (!quiet)
    std::cout << "run " << run_mode_name(cfg.mode) << ": "
              << run_status_name(result.traj.status) << ", t_est=" << result.traj.t_est
              << " (1/a_star=" << result.traj.t_ode << ")\n";
  return result;
}

int run_ode_blowup(const RunConfig& cfg, const std::filesystem::path& dir, bool quiet) {
  OdeRunResult r = run_ode_mode(cfg, dir, quiet);
  write_json(dir / "summary.json", r.summary);
  return r.ok ? 0 : 1;
}

int run_baseline_compare(const RunConfig& cfg, const std::filesystem::path& dir,
                         bool quiet) {
  OdeRunResult reg = run_ode_mode(cfg, dir, quiet);

  const Grid grid = build_grid(cfg);
  auto data = build_data(cfg, grid);
  BaselineOptions bopts;
  bopts.cfl = cfg.integrator.cfl;
  bopts.accuracy_order = cfg.integrator.accuracy_order;
  bopts.u_blowup = cfg.integrator.u_blowup;
  bopts.t_max = cfg.integrator.t_max;
  const BaselineTrajectory base = run_baseline(data, cfg.weight, bopts);
  write_baseline_csv(dir / "baseline.csv", base.records);

  json bsum;
  bsum["status"] = base.status == BaselineStatus::captured_divergence
                       ? "captured_divergence"
                       : base.status == BaselineStatus::reached_t_max ? "reached_t_max"
                         : base.status == BaselineStatus::dt_underflow ? "dt_underflow"
                                                                       : "invariant_breach";
  if (!base.records.empty()) {
    const double s0 = base.records.front().seminorm2_u;
    const double s1 = base.records.back().seminorm2_u;
    bsum["t_stop"] = base.records.back().time;
    bsum["sup_u_final"] = base.records.back().sup_u;
    bsum["seminorm2_initial"] = s0;
    bsum["seminorm2_final"] = s1;
    bsum["seminorm2_ratio"] = s0 > 0.0 ? s1 / s0 : 0.0;
  }

  json summary;
  summary["regularized"] = reg.summary;
  summary["baseline"] = bsum;
  summary["contrast"] = {
      {"q_ratio_max", reg.summary["q_ratio_max"]},
      {"baseline_seminorm2_ratio", bsum.value("seminorm2_ratio", 0.0)}};
  write_json(dir / "summary.json", summary);
  if (!quiet)
    std::cout << "baseline: " << bsum["status"] << ", seminorm2 ratio "
              << bsum.value("seminorm2_ratio", 0.0) << "\n";

  const bool baseline_ok = base.status != BaselineStatus::invariant_breach;
  return reg.ok && baseline_ok ? 0 : 1;
}

int run_shock_mode(const RunConfig& cfg, const std::filesystem::path& dir, bool quiet) {
  const CharacteristicState init = shock_initial_data(
      cfg.data.profile, cfg.data.epsilon_target, cfg.grid.points_per_axis);

  ShockOptions opts;
  opts.cfl = cfg.integrator.cfl;
  opts.mu_floor = cfg.integrator.mu_floor;
  opts.t_max = cfg.integrator.t_max > 0.0 ? cfg.integrator.t_max : 2.0;
  const ShockReport report = run_shock(init, opts);

  write_manifest(dir, cfg,
                 json{{"shock_data",
                       {{"epsilon_target", cfg.data.epsilon_target},
                        {"epsilon_measured", report.epsilon},
                        {"kappa", init.kappa},
                        {"lambda", init.lambda}}}});
  write_shock_csv(dir / "shock.csv", report);

  json summary;
  summary["status"] = shock_status_name(report.status);
  if (!report.breach.empty()) summary["breach"] = report.breach;
  summary["t_shock"] = report.t_shock;
  summary["epsilon"] = report.epsilon;
  summary["kappa"] = init.kappa;
  summary["lambda"] = init.lambda;
  summary["mu_floor"] = opts.mu_floor;
  summary["steps"] = report.records.size();
  if (!report.records.empty()) {
    summary["t_final"] = report.records.back().time;
    summary["mu_min_final"] = report.records.back().mu_min;
  }
  summary["sup_phi0"] = report.sup_phi0_overall;
  summary["sup_p"] = report.sup_p_overall;
  summary["sup_v_over_mu_final"] = report.sup_v_over_mu_final;
  summary["v_freezing_max"] = report.v_freezing_max;
  summary["mu_law_max"] = report.mu_law_max;
  summary["vacuum_edge_max"] = report.vacuum_edge_max;
  summary["range_violations"] = report.range_violations;
  write_json(dir / "summary.json", summary);

  if (!quiet)
    std::cout << "shock: " << shock_status_name(report.status)
              << ", t_shock=" << report.t_shock << " (epsilon=" << report.epsilon << ")\n";
  const bool ok =
      report.status == ShockStatus::shock_captured && report.range_violations == 0;
  return ok ? 0 : 1;
}

json certification_json(const WeightFunction& w, const AdmissibilityReport& report) {
  json checks = json::array();
  for (const auto& c : report.checks)
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"worst_value", c.worst_value},
                      {"worst_y", c.worst_y},
                      {"detail", c.detail}});
  return json{{"weight", w.name()},
              {"passed", report.passed},
              {"minimal_alpha", report.minimal_alpha},
              {"derivative_bounds", report.derivative_bounds},
              {"checks", checks}};
}

int run_certify_mode(const RunConfig& cfg, const std::filesystem::path& dir, bool quiet) {
  return execute_certify_all(dir, cfg.certify.y_max, cfg.certify.samples, quiet,
                             &cfg.weight);
}

void apply_sweep_value(RunConfig& cfg, const std::string& parameter, double value) {
  if (parameter == "data.lambda")
    cfg.data.lambda = value;
  else if (parameter == "data.kappa")
    cfg.data.kappa = value;
  else if (parameter == "data.delta")
    cfg.data.delta = value;
  else if (parameter == "data.epsilon_target")
    cfg.data.epsilon_target = value;
  else if (parameter == "weight.M")
    cfg.weight.exponent = static_cast<int>(value);
  else if (parameter == "grid.points_per_axis")
    cfg.grid.points_per_axis = static_cast<int>(value);
  else
    throw std::invalid_argument("unsupported sweep parameter: " + parameter);
}

int run_sweep(const RunConfig& cfg, const std::filesystem::path& dir, bool quiet) {
  if (!cfg.sweep || !cfg.sweep_run)
    throw std::invalid_argument("sweep mode needs sweep and run sections");
  const auto& values = cfg.sweep->values;

  struct Slot {
    int exit_code = 2;
    std::string directory;
    double value = 0.0;
  };
  std::vector<Slot> slots(values.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= values.size()) return;
      RunConfig sub = *cfg.sweep_run;
      apply_sweep_value(sub, cfg.sweep->parameter, values[i]);
      char name[32];
      std::snprintf(name, sizeof(name), "run_%03zu", i);
      const std::filesystem::path subdir = dir / name;
      std::filesystem::create_directories(subdir);
      ExecuteOptions sub_opts;
      sub_opts.output_override = subdir;
      sub_opts.quiet = true;
      Slot s;
      s.value = values[i];
      s.directory = name;
      try {
        s.exit_code = execute(sub, sub_opts);
      } catch (const std::exception& e) {
        s.exit_code = 2;
        if (!quiet) std::cerr << name << ": " << e.what() << "\n";
      }
      slots[i] = s;
    }
  };

  const std::size_t workers =
      std::min<std::size_t>(values.size(),
                            std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  write_manifest(dir, cfg, json::object());
  std::ofstream csv(dir / "sweep.csv");
  csv << "# schema rwave.sweep.v1\n";
  csv << "value,directory,exit_code\n";
  json entries = json::array();
  int code = 0;
  for (const auto& s : slots) {
    csv << format_double(s.value) << ',' << s.directory << ',' << s.exit_code << '\n';
    entries.push_back(
        {{"value", s.value}, {"directory", s.directory}, {"exit_code", s.exit_code}});
    code = std::max(code, s.exit_code);
  }
  write_json(dir / "summary.json",
             json{{"parameter", cfg.sweep->parameter}, {"runs", entries}});
  if (!quiet) std::cout << "sweep over " << cfg.sweep->parameter << ": " << values.size()
                        << " runs, worst exit code " << code << "\n";
  return code;
}

}  // namespace

int execute_certify_all(const std::filesystem::path& out_dir, double y_max, int samples,
                        bool quiet, const WeightFunction* only) {
  std::vector<WeightFunction> families;
  if (only) {
    families.push_back(*only);
  } else {
    families = {WeightFunction::power_inverse(1), WeightFunction::power_inverse(2),
                WeightFunction::power_shifted(1), WeightFunction::power_shifted(2),
                WeightFunction::exponential()};
  }

  json reports = json::array();
  bool all_passed = true;
  for (const auto& w : families) {
    const AdmissibilityReport report = certify_weight(w, y_max, samples);
    all_passed = all_passed && report.passed;
    reports.push_back(certification_json(w, report));
    if (!quiet)
      std::cout << (report.passed ? "[pass] " : "[FAIL] ") << w.name()
                << "  minimal alpha = " << report.minimal_alpha << "\n";
  }
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_json(out_dir / "certification.json",
               json{{"y_max", y_max}, {"samples", samples}, {"reports", reports}});
  }
  return all_passed ? 0 : 1;
}

int execute(const RunConfig& config, const ExecuteOptions& opts) {
  const std::filesystem::path dir = !opts.output_override.empty()
                                        ? opts.output_override
                                        : std::filesystem::path(config.output.directory);
  std::filesystem::create_directories(dir);
  try {
    switch (config.mode) {
      case RunMode::ode_blowup:
        return run_ode_blowup(config, dir, opts.quiet);
      case RunMode::baseline_compare:
        return run_baseline_compare(config, dir, opts.quiet);
      case RunMode::shock:
        return run_shock_mode(config, dir, opts.quiet);
      case RunMode::certify_weights:
        return run_certify_mode(config, dir, opts.quiet);
      case RunMode::sweep:
        return run_sweep(config, dir, opts.quiet);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace rwave

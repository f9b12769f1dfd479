#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rwave/config.hpp"
#include "rwave/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"rwave - blowup-capturing solver for quasilinear wave equations"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  bool quiet = false;

  CLI::App* run = app.add_subcommand("run", "Execute the run described by a config file");
  run->add_option("--config", config_path, "Path to the JSON run configuration")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory (overrides output.directory)");
  run->add_flag("--quiet", quiet, "Suppress progress output");

  CLI::App* sweep = app.add_subcommand("sweep", "Execute a parameter sweep config");
  sweep->add_option("--config", config_path, "Path to the JSON sweep configuration")
      ->required()
      ->check(CLI::ExistingFile);
  sweep->add_option("--out", out_dir, "Output directory (overrides output.directory)");
  sweep->add_flag("--quiet", quiet, "Suppress progress output");

  double y_max = 1e4;
  int samples = 2000;
  CLI::App* certify =
      app.add_subcommand("certify-weights", "Certify the shipped weight families");
  certify->add_option("--config", config_path,
                      "Optional config; certifies only its weight when given")
      ->check(CLI::ExistingFile);
  certify->add_option("--out", out_dir, "Directory for certification.json");
  certify->add_option("--y-max", y_max, "Upper end of the sampled domain");
  certify->add_option("--samples", samples, "Number of log-spaced samples");
  certify->add_flag("--quiet", quiet, "Suppress progress output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (certify->parsed()) {
      if (!config_path.empty()) {
        const rwave::RunConfig cfg = rwave::parse_config_file(config_path);
        return rwave::execute_certify_all(out_dir, y_max, samples, quiet, &cfg.weight);
      }
      return rwave::execute_certify_all(out_dir, y_max, samples, quiet);
    }

    const rwave::RunConfig cfg = rwave::parse_config_file(config_path);
    if (run->parsed() && cfg.mode == rwave::RunMode::sweep) {
      std::cerr << "error: sweep configs run through the 'sweep' subcommand\n";
      return 2;
    }
    if (sweep->parsed() && cfg.mode != rwave::RunMode::sweep) {
      std::cerr << "error: 'sweep' expects a config with mode = sweep\n";
      return 2;
    }
    rwave::ExecuteOptions opts;
    opts.output_override = out_dir;
    opts.quiet = quiet;
    return rwave::execute(cfg, opts);
  } catch (const rwave::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

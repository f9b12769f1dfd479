#pragma once

#include <filesystem>
#include <string>

#include "rwave/config.hpp"

namespace rwave {

struct ExecuteOptions {
  std::filesystem::path output_override;  // overrides output.directory when set
  bool quiet = false;
};

/// Runs the configured job and writes its artifacts (manifest.json,
/// diagnostics/shock CSVs, optional snapshots, summary.json) into the output
/// directory. Returns 0 iff the run finished without invariant violations.
int execute(const RunConfig& config, const ExecuteOptions& opts = {});

/// Certification entry point shared by the CLI: certifies every shipped
/// weight family (or just `only`, when non-null), writes certification.json
/// when out_dir is non-empty, and returns 0 iff all reports pass.
int execute_certify_all(const std::filesystem::path& out_dir, double y_max, int samples,
                        bool quiet, const WeightFunction* only = nullptr);

}  // namespace rwave

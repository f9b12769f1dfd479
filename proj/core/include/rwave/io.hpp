#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rwave/evolve.hpp"
#include "rwave/fields.hpp"
#include "rwave/shock.hpp"

namespace rwave {

/// Field snapshot format: a schema line, a header with
/// dimension,points_per_axis,domain_length, then one row-major value per
/// line printed with 17 significant digits (round-trip exact).
void write_field_csv(const std::filesystem::path& path, const ScalarField& field);
ScalarField read_field_csv(const std::filesystem::path& path);

/// One diagnostics record per row; the column schema is versioned in the
/// header comment.
void write_diagnostics_csv(const std::filesystem::path& path,
                           const std::vector<DiagnosticsRecord>& records);

void write_baseline_csv(const std::filesystem::path& path,
                        const std::vector<BaselineRecord>& records);

/// Per-step shock trace plus the final extrapolated shock time as a trailing
/// comment.
void write_shock_csv(const std::filesystem::path& path, const ShockReport& report);

/// Fixed-width float formatting used by every emitter (17 significant
/// digits, locale-independent).
std::string format_double(double v);

}  // namespace rwave

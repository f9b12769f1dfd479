#include "rwave/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rwave {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_field_csv(const std::filesystem::path& path, const ScalarField& field) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  const Grid& g = field.grid();
  out << "# schema rwave.field.v1\n";
  out << "dimension,points_per_axis,domain_length\n";
  out << g.dimension << ',' << g.points_per_axis << ',' << format_double(g.domain_length)
      << '\n';
  for (double v : field.values()) out << format_double(v) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

ScalarField read_field_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("# schema rwave.field", 0) != 0)
    throw std::runtime_error("not a field snapshot: " + path.string());
  if (!std::getline(in, line)) throw std::runtime_error("truncated snapshot header");
  if (!std::getline(in, line)) throw std::runtime_error("truncated snapshot header");
  std::istringstream hdr(line);
  int dim = 0, n = 0;
  double length = 0.0;
  char comma = 0;
  hdr >> dim >> comma >> n >> comma >> length;
  if (!hdr) throw std::runtime_error("malformed snapshot header in " + path.string());

  ScalarField field(make_grid(dim, n, length));
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (!std::getline(in, line))
      throw std::runtime_error("snapshot has too few values: " + path.string());
    field[i] = std::stod(line);
  }
  return field;
}

void write_diagnostics_csv(const std::filesystem::path& path,
                           const std::vector<DiagnosticsRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "# schema rwave.diagnostics.v1\n";
  out << "time,dt,ifact_star,basic_energy,controlling_q,friction_accumulated,"
         "indicator_friction_accumulated,sup_psi0,sup_grad_psi0,sup_psi_i,sup_dtphi,"
         "min_ratio,sup_psi0_drift,ifact_law_error,ifact_gradient_drift,"
         "energy_identity_residual,implication_violations,"
         "implication_violations_soft,friction_sign_violations\n";
  for (const auto& r : records) {
    out << format_double(r.time) << ',' << format_double(r.dt) << ','
        << format_double(r.ifact_star) << ',' << format_double(r.basic_energy) << ','
        << format_double(r.controlling_q) << ',' << format_double(r.friction_accumulated)
        << ',' << format_double(r.indicator_friction_accumulated) << ','
        << format_double(r.sup_psi0) << ',' << format_double(r.sup_grad_psi0) << ','
        << format_double(r.sup_psi_i) << ',' << format_double(r.sup_dtphi) << ','
        << format_double(r.min_ratio) << ',' << format_double(r.sup_psi0_drift) << ','
        << format_double(r.ifact_law_error) << ',' << format_double(r.ifact_gradient_drift)
        << ',' << format_double(r.energy_identity_residual) << ','
        << r.implication_violations << ',' << r.implication_violations_soft << ','
        << r.friction_sign_violations << '\n';
  }
}

void write_baseline_csv(const std::filesystem::path& path,
                        const std::vector<BaselineRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "# schema rwave.baseline.v1\n";
  out << "time,dt,sup_u,l2_u,seminorm2_u\n";
  for (const auto& r : records)
    out << format_double(r.time) << ',' << format_double(r.dt) << ','
        << format_double(r.sup_u) << ',' << format_double(r.l2_u) << ','
        << format_double(r.seminorm2_u) << '\n';
}

void write_shock_csv(const std::filesystem::path& path, const ShockReport& report) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "# schema rwave.shock.v1\n";
  out << "time,dt,mu_min,sup_v,sup_v_over_mu,sup_phi0,sup_p,range_violations\n";
  for (const auto& r : report.records)
    out << format_double(r.time) << ',' << format_double(r.dt) << ','
        << format_double(r.mu_min) << ',' << format_double(r.sup_v) << ','
        << format_double(r.sup_v_over_mu) << ',' << format_double(r.sup_phi0) << ','
        << format_double(r.sup_p) << ',' << r.range_violations << '\n';
  out << "# t_shock " << format_double(report.t_shock) << '\n';
}

}  // namespace rwave

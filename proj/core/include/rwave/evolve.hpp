#pragma once

#include <string>
#include <vector>

#include "rwave/diagnostics.hpp"
#include "rwave/state.hpp"
#include "rwave/weights.hpp"

namespace rwave {

/// Thrown when a run leaves the regime the scheme is valid in (integrating
/// factor no longer positive, hyperbolicity ratio below the guard, or a
/// non-finite value). Carries the offending location.
struct EvolveBreach : std::runtime_error {
  EvolveBreach(const std::string& what, double time, std::size_t index)
      : std::runtime_error(what), time(time), index(index) {}
  double time;
  std::size_t index;
};

/// ifact^-1 * w(psi0/ifact), bounded up to the singularity. Where |psi0|
/// exceeds theta the product is computed as y w(y) / psi0 (no division by
/// the vanishing integrating factor); otherwise the integrating factor is
/// bounded below along captured solutions and the direct quotient is safe.
/// Throws if both routes are ill-conditioned (ifact < ifact_stop and
/// |psi0| < theta), which signals solver breakdown.
double stable_inverse_weight_product(double psi0, double ifact, const WeightFunction& w,
                                     double theta = 1e-3, double ifact_stop = 1e-2);

struct StateDerivative {
  ScalarField dpsi0;
  std::vector<ScalarField> dpsi;
  ScalarField difact;
};

/// Time derivative of the regularized system at the given state:
///   d_t psi0  = w(y) div(psi) + ifact^-1 w(y) sum_a psi_a^2
///               - w(y) sum_a psi_ring_a psi_a,      y = psi0/ifact
///   d_t psi_i = d_i psi0 - psi_ring_i psi0
///   d_t ifact = -psi0
struct RhsOptions {
  int accuracy_order = 4;
  double hyperbolicity_guard = -0.45;
  double theta = 1e-3;
  double ifact_stop = 1e-2;
};
StateDerivative regularized_rhs(const RenormalizedState& state, const WeightFunction& w,
                                const RhsOptions& opts);

/// Classical 4-stage explicit step of the regularized system.
RenormalizedState step_rk4(const RenormalizedState& state, double dt,
                           const WeightFunction& w, const RhsOptions& opts);

enum class RunStatus {
  captured_blowup,   // ifact_star reached ifact_stop
  reached_t_max,
  reached_stop_time, // exact-time stop for convergence studies
  invariant_breach,
  step_limit,
};

std::string run_status_name(RunStatus s);

struct RunOptions {
  double cfl = 0.4;
  int accuracy_order = 4;
  double ifact_stop = 1e-2;
  double t_max = 0.0;  // 0 selects the 2/a_star horizon
  int k_max = 5;       // controlling-quantity derivative order
  int friction_k = 0;  // friction accumulators include orders 0..friction_k
  double hyperbolicity_guard = -0.45;
  double dt_fixed = 0.0;    // > 0 disables the adaptive step (refinement studies)
  double stop_time = 0.0;   // > 0 integrates exactly to this time, then stops
  std::vector<double> snapshot_times;
  std::size_t max_steps = 2000000;
};

struct Trajectory {
  std::vector<DiagnosticsRecord> records;
  RunStatus status = RunStatus::reached_t_max;
  double t_est = 0.0;   // extrapolated vanishing time of ifact_star
  double t_ode = 0.0;   // 1 / a_star
  double fit_slope = 0.0;
  std::string breach;
  std::vector<RenormalizedState> snapshots;
  RenormalizedState final_state;
};

/// Integrates the regularized system until ifact_star <= ifact_stop, the
/// time horizon, or an invariant breach, recording diagnostics per accepted
/// step. The step size is the CFL bound cfl*h/max(sqrt(w), 1), additionally
/// capped near the stop so the integrating factor cannot cross zero inside
/// one step.
Trajectory run_regularized(std::shared_ptr<const InitialData> data,
                           const WeightFunction& w, const RunOptions& opts);

/// phi = phi(0,.) - ln(ifact); d_t phi = psi0/ifact, d_i phi = psi_i/ifact.
struct PhiRecovery {
  ScalarField phi;
  ScalarField dphi_dt;
  std::vector<ScalarField> dphi_dx;
};
PhiRecovery recover_phi(const RenormalizedState& state);

// Direct integration of the raw-variable wave equation
//   d_t phi = u,  d_t u = w(u) Lap(phi) + u^2,
// used as the contrast run: its raw-variable seminorms diverge while the
// renormalized run's controlling quantity stays bounded.
struct BaselineOptions {
  double cfl = 0.4;
  int accuracy_order = 4;
  double u_blowup = 1e3;       // stop once sup|u| exceeds this
  double ode_dt_safety = 0.05; // dt <= ode_dt_safety / sup|u|
  double t_max = 0.0;          // 0 selects the 2/a_star horizon
  double hyperbolicity_guard = -0.45;
  std::size_t max_steps = 2000000;
};

enum class BaselineStatus { captured_divergence, reached_t_max, dt_underflow, invariant_breach };

struct BaselineRecord {
  double time = 0.0;
  double dt = 0.0;
  double sup_u = 0.0;
  double l2_u = 0.0;
  double seminorm2_u = 0.0;
};

struct BaselineTrajectory {
  std::vector<BaselineRecord> records;
  BaselineStatus status = BaselineStatus::reached_t_max;
  std::string breach;
  BaselineState final_state;
};

BaselineTrajectory run_baseline(std::shared_ptr<const InitialData> data,
                                const WeightFunction& w, const BaselineOptions& opts);

}  // namespace rwave

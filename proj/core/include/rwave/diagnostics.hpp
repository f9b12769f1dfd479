#pragma once

#include <cstdint>
#include <vector>

#include "rwave/state.hpp"
#include "rwave/weights.hpp"

namespace rwave {

/// Per-step scalar diagnostics of a regularized run.
struct DiagnosticsRecord {
  double time = 0.0;
  double dt = 0.0;
  double ifact_star = 0.0;  // min of the integrating factor over the slice
  double basic_energy = 0.0;
  double controlling_q = 0.0;
  double friction_accumulated = 0.0;            // signed friction integral
  double indicator_friction_accumulated = 0.0;  // small-ifact friction integral
  double sup_psi0 = 0.0;
  double sup_grad_psi0 = 0.0;
  double sup_psi_i = 0.0;
  double sup_dtphi = 0.0;  // max of psi0 / ifact
  double min_ratio = 0.0;  // min of psi0 / ifact (hyperbolicity monitor)
  double sup_psi0_drift = 0.0;        // sup |psi0 - psi0(0,.)|
  double ifact_law_error = 0.0;       // sup |ifact - (1 - t psi0(0,.))|
  double ifact_gradient_drift = 0.0;  // sup |d_i ifact + psi_i - ifact psi_ring_i|
  double energy_identity_residual = 0.0;
  std::int64_t implication_violations = 0;       // ifact <= 1/8 but psi0 < a_star/8
  std::int64_t implication_violations_soft = 0;  // ifact <= 1/4 but psi0 < a_star/4 - tol
  std::int64_t friction_sign_violations = 0;     // y >= 1 but y^2 w'(y) > 0
};

/// Energy of the array V = (v0, v[1..d]) with the state-dependent weight:
/// integral of v0^2 + sum_a w(psi0/ifact) v_a^2.
double basic_energy_of(const ScalarField& v0, const std::vector<ScalarField>& v,
                       const RenormalizedState& state, const WeightFunction& w);

/// basic_energy_of evaluated at V = (psi0, psi).
double basic_energy(const RenormalizedState& state, const WeightFunction& w);

/// The L2 quantity controlling the solution up to order k_max:
///   sum_{k=2}^{k_max} int(|grad^k psi0|^2 + sum_a w |grad^k psi_a|^2)
/// + sum_{k=1}^{k_max-1} sum_a int |grad^k psi_a|^2
/// + eps_ring^3 int(|grad psi0|^2 + sum_a psi_a^2).
double controlling_quantity(const RenormalizedState& state, const WeightFunction& w,
                            double eps_ring, int k_max, int order);

struct FrictionIncrement {
  double friction = 0.0;            // dt * int sum_a y^2 w'(y) |grad^k psi_a|^2
  double indicator_friction = 0.0;  // dt * int_{ifact small} ifact^-2 |w'| |grad^k psi_a|^2
  std::int64_t sign_violations = 0;
};

/// One-step increments of both friction accumulators; derivative orders
/// 0..k_order are included (k_order = 0 uses psi_a itself). The indicator
/// region is ifact <= (1/4) min(1, a_star); the singular prefactor is
/// evaluated there through y^2 |w'(y)| / psi0^2, which avoids dividing by
/// the vanishing integrating factor.
FrictionIncrement friction_step(const RenormalizedState& state, const WeightFunction& w,
                                double dt, double a_star, int k_order, int order);

struct LifespanPrediction {
  double t_predicted = 0.0;  // root of the affine fit
  double t_ode = 0.0;        // 1 / a_star
  double slope = 0.0;
  double intercept = 0.0;
};

/// Least-squares affine fit of ifact_star over the final quartile of the
/// sample series; returns its root together with the closed-form ODE
/// prediction. Throws if fewer than 3 samples or if the tail is not
/// decreasing.
LifespanPrediction lifespan_predict(const std::vector<std::pair<double, double>>& series,
                                    double a_star);

/// Residual of the base-order energy identity between two adjacent accepted
/// states: |dE/dt - RHS| / (|E| + 1), with dE/dt from the state difference
/// and the right-hand side assembled term by term at the field midpoint with
/// the same stencils the solver uses.
double energy_identity_residual(const RenormalizedState& before,
                                const RenormalizedState& after,
                                const WeightFunction& w, int order);

struct ImplicationCounts {
  std::int64_t hard = 0;  // ifact <= 1/8 and psi0 < a_star/8
  std::int64_t soft = 0;  // ifact <= 1/4 and psi0 < a_star/4 - tol
};

ImplicationCounts implication_monitor(const RenormalizedState& state, double a_star);

}  // namespace rwave

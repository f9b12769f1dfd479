#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <numbers>

#include "rwave/evolve.hpp"

using namespace rwave;

namespace {

constexpr double kPi = std::numbers::pi;

RenormalizedState zero_state(const Grid& g) {
  auto data = std::make_shared<InitialData>(homogeneous_data(0.0, g));
  return make_initial_state(data);
}

std::shared_ptr<const InitialData> test_bump(const Grid& g, double lambda = 4.0) {
  BumpDataOptions opts;
  opts.spatial_radius = 2.0;
  return std::make_shared<InitialData>(
      make_bump_data(BumpProfile::gaussian, 1.0, lambda, g, opts));
}

double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("rhs vanishes on the zero state") {
  const Grid g = make_grid(2, 16, 4.0);
  const RenormalizedState s = zero_state(g);
  const StateDerivative d = regularized_rhs(s, WeightFunction::power_shifted(1), {});
  CHECK(sup_norm(d.dpsi0) == 0.0);
  CHECK(sup_norm(d.difact) == 0.0);
  for (const auto& f : d.dpsi) CHECK(sup_norm(f) == 0.0);
}

TEST_CASE("rhs on homogeneous data reduces to the scalar law") {
  const Grid g = make_grid(1, 32, 2.0);
  auto data = std::make_shared<InitialData>(homogeneous_data(0.75, g));
  RenormalizedState s = make_initial_state(data);
  s.ifact = ScalarField(g, 0.5);  // any constant level
  const StateDerivative d = regularized_rhs(s, WeightFunction::exponential(), {});
  CHECK(sup_norm(d.dpsi0) <= 1e-13);
  CHECK(sup_norm(d.dpsi[0]) <= 1e-13);
  for (double v : d.difact.values()) CHECK(v == -0.75);
}

TEST_CASE("rhs reproduces the hand-assembled divergence and quadratic terms") {
  const Grid g = make_grid(1, 128, 1.0);
  RenormalizedState s = zero_state(g);
  s.psi[0] = field_from_function(
      g, [&](const std::array<double, 3>& x) { return std::sin(2.0 * kPi * x[0]); });
  RhsOptions opts;
  opts.accuracy_order = 4;
  const StateDerivative d = regularized_rhs(s, WeightFunction::power_shifted(1), opts);
  // psi0 = 0, ifact = 1: the weight factors are w(0) = 1 and the coefficient
  // data vanish, leaving exactly stencil(psi_1) + psi_1^2
  ScalarField expected = partial_derivative(s.psi[0], 0, 4);
  for (std::size_t i = 0; i < expected.size(); ++i)
    expected[i] += s.psi[0][i] * s.psi[0][i];
  CHECK(max_abs_diff(d.dpsi0, expected) <= 1e-14);
}

TEST_CASE("stable inverse-weight product") {
  const WeightFunction ps1 = WeightFunction::power_shifted(1);
  // near-singular integrating factor: the rewritten branch stays accurate
  CHECK(stable_inverse_weight_product(1.0, 1e-3, ps1) ==
        doctest::Approx(1000.0 / 1001.0).epsilon(1e-12));
  CHECK(stable_inverse_weight_product(0.0, 1.0, ps1) == 1.0);
  CHECK(stable_inverse_weight_product(2.0, 1.0, WeightFunction::exponential()) ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-12));

  // both branches agree where both are well conditioned
  for (double psi0 : {0.3, 1.0, 2.5}) {
    for (double ifact : {1.0, 0.4, 0.05}) {
      const double stable = stable_inverse_weight_product(psi0, ifact, ps1);
      const double direct = eval_weight(ps1, psi0 / ifact) / ifact;
      CHECK(stable == doctest::Approx(direct).epsilon(1e-12));
    }
  }

  // ill-conditioned corner: tiny ifact and tiny psi0 has no safe route
  CHECK_THROWS_AS(
      (void)stable_inverse_weight_product(1e-9, 1e-3, ps1, 1e-3, 1e-2),
      std::runtime_error);
}

TEST_CASE("rk4 leaves the zero state unchanged") {
  const Grid g = make_grid(1, 32, 1.0);
  const RenormalizedState s = zero_state(g);
  const RenormalizedState out = step_rk4(s, 1e-2, WeightFunction::power_shifted(1), {});
  CHECK(max_abs_diff(out.psi0, s.psi0) == 0.0);
  CHECK(max_abs_diff(out.ifact, s.ifact) == 0.0);
}

TEST_CASE("rk4 is exact on homogeneous data") {
  const Grid g = make_grid(1, 32, 1.0);
  auto data = std::make_shared<InitialData>(homogeneous_data(1.0, g));
  RenormalizedState s = make_initial_state(data);
  s = step_rk4(s, 1e-3, WeightFunction::power_shifted(1), {});
  for (double v : s.psi0.values()) CHECK(v == 1.0);
  for (double v : s.ifact.values())
    CHECK(std::fabs(v - (1.0 - 1e-3)) <= 1e-15);
}

TEST_CASE("baseline integrator converges at fourth order on the scalar blowup ODE") {
  // homogeneous data turn the baseline into u' = u^2 with u(t) = 1/(1 - t)
  const Grid g = make_grid(1, 8, 1.0);
  auto data = std::make_shared<InitialData>(homogeneous_data(1.0, g));
  auto err_at = [&](double dt) {
    BaselineState s = make_baseline_state(*data);
    const WeightFunction w = WeightFunction::power_shifted(1);
    while (s.time < 0.5 - 1e-12) {
      // RK4 step inlined through run_baseline is CFL-limited; here we step
      // the exact ODE reduction by hand to measure the scheme order.
      auto rhs = [&](const BaselineState& q) {
        BaselineState d;
        d.phi = q.phidot;
        d.phidot = ScalarField(g);
        for (std::size_t i = 0; i < q.phidot.size(); ++i) {
          const double u = q.phidot[i];
          d.phidot[i] = eval_weight(w, u) * 0.0 + u * u;
        }
        return d;
      };
      const BaselineState k1 = rhs(s);
      BaselineState s2 = s;
      field_axpy(s2.phi, 0.5 * dt, k1.phi);
      field_axpy(s2.phidot, 0.5 * dt, k1.phidot);
      const BaselineState k2 = rhs(s2);
      BaselineState s3 = s;
      field_axpy(s3.phi, 0.5 * dt, k2.phi);
      field_axpy(s3.phidot, 0.5 * dt, k2.phidot);
      const BaselineState k3 = rhs(s3);
      BaselineState s4 = s;
      field_axpy(s4.phi, dt, k3.phi);
      field_axpy(s4.phidot, dt, k3.phidot);
      const BaselineState k4 = rhs(s4);
      for (std::size_t i = 0; i < s.phi.size(); ++i) {
        s.phi[i] += dt / 6.0 * (k1.phi[i] + 2 * k2.phi[i] + 2 * k3.phi[i] + k4.phi[i]);
        s.phidot[i] +=
            dt / 6.0 * (k1.phidot[i] + 2 * k2.phidot[i] + 2 * k3.phidot[i] + k4.phidot[i]);
      }
      s.time += dt;
    }
    return std::fabs(s.phidot[0] - 1.0 / (1.0 - 0.5));
  };
  const double e1 = err_at(1.0 / 256.0);
  const double e2 = err_at(1.0 / 512.0);
  const double order = std::log2(e1 / e2);
  CHECK(order >= 3.7);
  CHECK(order <= 4.3);
}

TEST_CASE("one step forward and back returns the state to rounding") {
  const Grid g = make_grid(1, 64, 24.0);
  auto data = test_bump(g);
  const RenormalizedState s0 = make_initial_state(data);
  const WeightFunction w = WeightFunction::power_shifted(1);
  RhsOptions opts;
  const double dt = 1e-3;
  const RenormalizedState fwd = step_rk4(s0, dt, w, opts);
  const RenormalizedState back = step_rk4(fwd, -dt, w, opts);
  const double scale = std::max(1.0, sup_norm(s0.psi0));
  const double eps = std::numeric_limits<double>::epsilon();
  CHECK(max_abs_diff(back.psi0, s0.psi0) <= 10.0 * eps * scale);
  CHECK(max_abs_diff(back.ifact, s0.ifact) <= 10.0 * eps * scale);
  CHECK(max_abs_diff(back.psi[0], s0.psi[0]) <= 10.0 * eps * scale);
}

TEST_CASE("phi recovery") {
  const Grid g = make_grid(1, 32, 1.0);
  auto data = std::make_shared<InitialData>(homogeneous_data(1.0, g));

  SUBCASE("identity at t = 0") {
    const RenormalizedState s = make_initial_state(data);
    const PhiRecovery rec = recover_phi(s);
    CHECK(max_abs_diff(rec.phi, data->phi0) == 0.0);
    for (double v : rec.dphi_dt.values()) CHECK(v == 1.0);
  }

  SUBCASE("homogeneous blowup profile is -ln(1 - t)") {
    RunOptions opts;
    opts.accuracy_order = 2;
    opts.k_max = 2;
    const Trajectory traj = run_regularized(data, WeightFunction::power_shifted(1), opts);
    REQUIRE(traj.status == RunStatus::captured_blowup);
    const RenormalizedState& end = traj.final_state;
    const PhiRecovery rec = recover_phi(end);
    const double expected = -std::log(1.0 - end.time);
    for (double v : rec.phi.values()) CHECK(v == doctest::Approx(expected).epsilon(1e-9));
  }

  SUBCASE("recovered time derivative matches a centered difference of phi") {
    const Grid gb = make_grid(1, 128, 24.0);
    auto bump = test_bump(gb);
    RenormalizedState s = make_initial_state(bump);
    const WeightFunction w = WeightFunction::power_shifted(1);
    RhsOptions ropts;
    const double dt = 1e-3;
    for (int i = 0; i < 100; ++i) s = step_rk4(s, dt, w, ropts);
    const RenormalizedState before = s;
    const RenormalizedState mid = step_rk4(before, dt, w, ropts);
    const RenormalizedState after = step_rk4(mid, dt, w, ropts);
    const PhiRecovery ra = recover_phi(after);
    const PhiRecovery rb = recover_phi(before);
    const PhiRecovery rm = recover_phi(mid);
    double worst = 0.0;
    for (std::size_t i = 0; i < ra.phi.size(); ++i)
      worst = std::max(worst,
                       std::fabs((ra.phi[i] - rb.phi[i]) / (2.0 * dt) - rm.dphi_dt[i]));
    CHECK(worst <= 5.0 * dt * dt);
  }
}

TEST_CASE("homogeneous run is captured with the exact lifespan") {
  const Grid g = make_grid(1, 64, 1.0);
  auto data = std::make_shared<InitialData>(homogeneous_data(1.0, g));
  RunOptions opts;
  opts.accuracy_order = 2;
  opts.k_max = 2;
  const Trajectory traj = run_regularized(data, WeightFunction::power_shifted(1), opts);
  REQUIRE(traj.status == RunStatus::captured_blowup);
  CHECK(std::fabs(traj.t_est - 1.0) <= 1e-6);
  for (const auto& r : traj.records) {
    CHECK(r.sup_psi0_drift <= 1e-10);
    CHECK(r.ifact_law_error <= 1e-10);
  }
}

TEST_CASE("zero data stays static up to t_max") {
  const Grid g = make_grid(1, 32, 1.0);
  auto data = std::make_shared<InitialData>(homogeneous_data(0.0, g));
  RunOptions opts;
  opts.accuracy_order = 2;
  opts.k_max = 2;
  opts.t_max = 0.5;
  const Trajectory traj = run_regularized(data, WeightFunction::power_shifted(1), opts);
  CHECK(traj.status == RunStatus::reached_t_max);
  CHECK(traj.final_state.time >= 0.5 - 1e-9);
  CHECK(sup_norm(traj.final_state.psi0) == 0.0);
  CHECK(max_abs_diff(traj.final_state.ifact, ScalarField(g, 1.0)) == 0.0);
}

TEST_CASE("missing t_max for non-blowup data is rejected") {
  const Grid g = make_grid(1, 32, 1.0);
  auto data = std::make_shared<InitialData>(homogeneous_data(0.0, g));
  CHECK_THROWS_AS((void)run_regularized(data, WeightFunction::power_shifted(1), {}),
                  std::invalid_argument);
}

TEST_CASE("spatial-derivative identity is conserved by the scheme") {
  const Grid g = make_grid(1, 256, 24.0);
  auto data = test_bump(g);
  RunOptions opts;
  opts.stop_time = 0.3;
  const Trajectory traj = run_regularized(data, WeightFunction::power_shifted(1), opts);
  REQUIRE(traj.status == RunStatus::reached_stop_time);
  // the solver's own stencil conserves the identity to rounding
  for (const auto& r : traj.records) CHECK(r.ifact_gradient_drift <= 1e-11);
}

TEST_CASE("baseline homogeneous run diverges at the Riccati time") {
  const Grid g = make_grid(1, 64, 1.0);
  auto data = std::make_shared<InitialData>(homogeneous_data(1.0, g));
  BaselineOptions opts;
  opts.accuracy_order = 2;
  const BaselineTrajectory traj = run_baseline(data, WeightFunction::power_shifted(1), opts);
  REQUIRE(traj.status == BaselineStatus::captured_divergence);
  // sup u crosses 1e3 at t = 1 - 1e-3 for u = 1/(1-t)
  CHECK(std::fabs(traj.records.back().time - 0.999) <= 2e-3);
}

TEST_CASE("baseline zero data is static") {
  const Grid g = make_grid(1, 32, 1.0);
  auto data = std::make_shared<InitialData>(homogeneous_data(0.0, g));
  BaselineOptions opts;
  opts.accuracy_order = 2;
  opts.t_max = 0.25;
  const BaselineTrajectory traj = run_baseline(data, WeightFunction::power_shifted(1), opts);
  CHECK(traj.status == BaselineStatus::reached_t_max);
  CHECK(sup_norm(traj.final_state.phidot) == 0.0);
}

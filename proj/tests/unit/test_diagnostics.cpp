#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "rwave/diagnostics.hpp"
#include "rwave/evolve.hpp"

using namespace rwave;

namespace {

RenormalizedState flat_state(const Grid& g, double psi0, double ifact,
                             std::vector<double> psi_vals) {
  auto data = std::make_shared<InitialData>(homogeneous_data(0.0, g));
  RenormalizedState s = make_initial_state(data);
  s.psi0 = ScalarField(g, psi0);
  s.ifact = ScalarField(g, ifact);
  for (std::size_t a = 0; a < psi_vals.size(); ++a) s.psi[a] = ScalarField(g, psi_vals[a]);
  return s;
}

// Straightforward reimplementation of the controlling quantity used as an
// oracle: nested loops, no shared code with the library path beyond the
// stencil primitives.
double naive_q(const RenormalizedState& s, const WeightFunction& w, double eps, int k_max,
               int order) {
  double q = 0.0;
  const double measure = s.grid().cell_measure();
  ScalarField wf(s.grid());
  for (std::size_t i = 0; i < wf.size(); ++i)
    wf[i] = eval_weight(w, s.psi0[i] / s.ifact[i]);
  for (int k = 2; k <= k_max; ++k) {
    const ScalarField g0 = grad_pow_sq(s.psi0, k, order);
    for (std::size_t i = 0; i < g0.size(); ++i) q += g0[i] * measure;
    for (const auto& pa : s.psi) {
      const ScalarField ga = grad_pow_sq(pa, k, order);
      for (std::size_t i = 0; i < ga.size(); ++i) q += wf[i] * ga[i] * measure;
    }
  }
  for (int k = 1; k < k_max; ++k)
    for (const auto& pa : s.psi) {
      const ScalarField ga = grad_pow_sq(pa, k, order);
      for (std::size_t i = 0; i < ga.size(); ++i) q += ga[i] * measure;
    }
  for (std::size_t i = 0; i < s.psi0.size(); ++i) {
    double low = 0.0;
    for (const auto& pa : s.psi) low += pa[i] * pa[i];
    q += eps * eps * eps * low * measure;
  }
  const ScalarField g1 = grad_pow_sq(s.psi0, 1, order);
  for (std::size_t i = 0; i < g1.size(); ++i) q += eps * eps * eps * g1[i] * measure;
  return q;
}

}  // namespace

TEST_CASE("basic energy closed forms") {
  const Grid g = make_grid(1, 64, 1.0);
  const WeightFunction ps1 = WeightFunction::power_shifted(1);

  const RenormalizedState zero = flat_state(g, 0.0, 1.0, {0.0});
  CHECK(basic_energy(zero, ps1) == 0.0);

  const RenormalizedState unit = flat_state(g, 1.0, 1.0, {0.0});
  // weight plays no role when the spatial components vanish
  CHECK(basic_energy(unit, ps1) == doctest::Approx(1.0).epsilon(1e-14));

  // independent V array: v0 = 0, v1 = 1 with ratio y = 1 gives w(1) = 1/2
  const RenormalizedState y1 = flat_state(g, 1.0, 1.0, {0.0});
  const ScalarField v0(g, 0.0);
  const std::vector<ScalarField> v = {ScalarField(g, 1.0)};
  CHECK(basic_energy_of(v0, v, y1, ps1) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("controlling quantity agrees with the naive assembly") {
  const Grid g = make_grid(1, 256, 24.0);
  BumpDataOptions opts;
  opts.spatial_radius = 2.0;
  auto data = std::make_shared<InitialData>(
      make_bump_data(BumpProfile::gaussian, 1.0, 3.0, g, opts));
  const RenormalizedState s = make_initial_state(data);
  const WeightFunction w = WeightFunction::power_shifted(1);
  const double eps = data->params.eps_ring;
  const double lib = controlling_quantity(s, w, eps, 5, 4);
  const double oracle = naive_q(s, w, eps, 5, 4);
  CHECK(lib == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(lib > 0.0);
}

TEST_CASE("controlling quantity vanishes on constant states") {
  const Grid g = make_grid(1, 64, 1.0);
  const RenormalizedState s = flat_state(g, 0.8, 0.9, {0.0});
  CHECK(controlling_quantity(s, WeightFunction::power_shifted(1), 0.1, 5, 2) <= 1e-20);
}

TEST_CASE("friction pointwise factor at y = 1") {
  const Grid g = make_grid(1, 64, 1.0);
  const WeightFunction ps1 = WeightFunction::power_shifted(1);
  // psi0 = ifact = 1 so y = 1; psi_1 = 1 on a unit domain
  const RenormalizedState s = flat_state(g, 1.0, 1.0, {1.0});
  const FrictionIncrement inc = friction_step(s, ps1, 0.1, 1.0, 0, 2);
  // y^2 w'(y) = -1/4, integral of psi^2 = 1, dt = 0.1
  CHECK(inc.friction == doctest::Approx(-0.025).epsilon(1e-13));
  CHECK(inc.sign_violations == 0);
  CHECK(inc.indicator_friction == 0.0);  // ifact = 1 is far from the indicator set

  const RenormalizedState zero = flat_state(g, 1.0, 1.0, {0.0});
  const FrictionIncrement none = friction_step(zero, ps1, 0.1, 1.0, 0, 2);
  CHECK(none.friction == 0.0);
  CHECK(none.indicator_friction == 0.0);
}

TEST_CASE("indicator friction uses the stable singular prefactor") {
  const Grid g = make_grid(1, 64, 1.0);
  const WeightFunction ps1 = WeightFunction::power_shifted(1);
  // ifact = 0.2 <= 1/4, psi0 = 1: prefactor ifact^-2 |w'| evaluated via
  // y^2 |w'| / psi0^2 must match the direct quotient here
  const RenormalizedState s = flat_state(g, 1.0, 0.2, {0.5});
  const FrictionIncrement inc = friction_step(s, ps1, 1.0, 1.0, 0, 2);
  const double y = 5.0;
  const double direct = std::fabs(eval_weight_derivative(ps1, y)) / (0.2 * 0.2) * 0.25;
  CHECK(inc.indicator_friction == doctest::Approx(direct).epsilon(1e-12));
  CHECK(inc.indicator_friction > 0.0);
}

TEST_CASE("lifespan prediction") {
  SUBCASE("exact affine series") {
    std::vector<std::pair<double, double>> series = {{0.0, 1.0}, {0.1, 0.9}, {0.2, 0.8}};
    const LifespanPrediction fit = lifespan_predict(series, 1.0);
    CHECK(fit.t_predicted == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.t_ode == 1.0);
    CHECK(fit.slope == doctest::Approx(-1.0).epsilon(1e-12));
  }
  SUBCASE("homogeneous run with delta = 2") {
    const Grid g = make_grid(1, 64, 1.0);
    auto data = std::make_shared<InitialData>(homogeneous_data(2.0, g));
    RunOptions opts;
    opts.accuracy_order = 2;
    opts.k_max = 2;
    const Trajectory traj = run_regularized(data, WeightFunction::power_shifted(1), opts);
    REQUIRE(traj.status == RunStatus::captured_blowup);
    CHECK(std::fabs(traj.t_est - 0.5) <= 1e-6);
  }
  SUBCASE("non-decreasing series is rejected") {
    std::vector<std::pair<double, double>> series = {{0.0, 1.0}, {0.1, 1.0}, {0.2, 1.1}};
    CHECK_THROWS_AS((void)lifespan_predict(series, 1.0), std::invalid_argument);
  }
  SUBCASE("too few samples") {
    std::vector<std::pair<double, double>> series = {{0.0, 1.0}, {0.1, 0.9}};
    CHECK_THROWS_AS((void)lifespan_predict(series, 1.0), std::invalid_argument);
  }
}

TEST_CASE("energy identity residual") {
  const WeightFunction ps1 = WeightFunction::power_shifted(1);

  SUBCASE("zero on static and homogeneous evolutions") {
    const Grid g = make_grid(1, 64, 1.0);
    auto data = std::make_shared<InitialData>(homogeneous_data(1.0, g));
    RenormalizedState s0 = make_initial_state(data);
    const RenormalizedState s1 = step_rk4(s0, 1e-3, ps1, {});
    CHECK(energy_identity_residual(s0, s1, ps1, 2) <= 1e-13);
  }

  SUBCASE("small and refining on bump runs") {
    auto residual_at = [&](int n) {
      const Grid g = make_grid(1, n, 24.0);
      BumpDataOptions opts;
      opts.spatial_radius = 2.0;
      auto data = std::make_shared<InitialData>(
          make_bump_data(BumpProfile::gaussian, 1.0, 3.0, g, opts));
      RenormalizedState s = make_initial_state(data);
      RhsOptions ropts;
      const double dt = 2.4 / n;  // fixed Courant ratio across resolutions
      for (int i = 0; i < n / 8; ++i) s = step_rk4(s, dt, WeightFunction::power_shifted(1), ropts);
      const RenormalizedState next = step_rk4(s, dt, WeightFunction::power_shifted(1), ropts);
      return energy_identity_residual(s, next, WeightFunction::power_shifted(1), 4);
    };
    const double r1 = residual_at(256);
    const double r2 = residual_at(512);
    CHECK(r1 < 1e-3);
    CHECK(std::log2(r1 / r2) >= 1.5);  // at least second order under halving
  }
}

TEST_CASE("lifespan fit slope approaches the negative blowup amplitude") {
  const Grid g = make_grid(1, 512, 48.0);
  BumpDataOptions opts;
  opts.spatial_radius = 4.0;
  auto data = std::make_shared<InitialData>(
      make_bump_data(BumpProfile::gaussian, 1.0, 8.0, g, opts));
  RunOptions ropts;
  const Trajectory traj = run_regularized(data, WeightFunction::power_shifted(1), ropts);
  REQUIRE(traj.status == RunStatus::captured_blowup);
  const double a_star = data->params.a_star;
  CHECK(std::fabs(traj.fit_slope + a_star) <= 10.0 * data->params.eps_ring);
}

TEST_CASE("implication monitor counts") {
  const Grid g = make_grid(1, 16, 1.0);
  // ifact small but psi0 large: no violation
  const RenormalizedState fine = flat_state(g, 1.0, 0.1, {0.0});
  CHECK(implication_monitor(fine, 1.0).hard == 0);
  // ifact small and psi0 small: every point violates
  const RenormalizedState bad = flat_state(g, 0.01, 0.1, {0.0});
  CHECK(implication_monitor(bad, 1.0).hard == 16);
  // ifact large: nothing to check
  const RenormalizedState tall = flat_state(g, -0.1, 1.0, {0.0});
  CHECK(implication_monitor(tall, 1.0).hard == 0);
}

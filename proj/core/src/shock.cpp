#include "rwave/shock.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rwave/diagnostics.hpp"

namespace rwave {

namespace {

// Profile on [0, 1]: the radial bump re-centered, f(s) = P(2s - 1).
double shock_profile(BumpProfile p, double s) {
  return profile_value(p, 2.0 * s - 1.0);
}

double shock_profile_derivative(BumpProfile p, double s) {
  return 2.0 * profile_derivative(p, 2.0 * s - 1.0);
}

// sup over s in [0,1] of 2 |f'(s)| / sqrt(1 + kappa f(s)), located by dense
// sampling plus local parabolic refinement; this fixes the normalization of
// the ingoing derivative.
double sup_scaled_slope(BumpProfile p, double kappa) {
  const int N = 200000;
  auto q = [&](double s) {
    return 2.0 * std::fabs(shock_profile_derivative(p, s)) /
           std::sqrt(1.0 + kappa * shock_profile(p, s));
  };
  double best = 0.0, at = 0.0;
  for (int i = 0; i <= N; ++i) {
    const double s = static_cast<double>(i) / N;
    const double v = q(s);
    if (v > best) {
      best = v;
      at = s;
    }
  }
  double lo = std::max(0.0, at - 2.0 / N), hi = std::min(1.0, at + 2.0 / N);
  for (int iter = 0; iter < 200; ++iter) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (q(m1) < q(m2))
      lo = m1;
    else
      hi = m2;
  }
  return q(0.5 * (lo + hi));
}

}  // namespace

CharacteristicState shock_initial_data(BumpProfile profile, double epsilon_target, int n) {
  if (!(epsilon_target > 0.0 && epsilon_target < 0.25))
    throw std::invalid_argument("epsilon_target must lie in (0, 1/4)");
  if (n < 16) throw std::invalid_argument("u-lattice needs at least 16 intervals");

  // kappa > 0 puts the negative lobe of Lbar phi0 on the rising side of the
  // bump, so the normalized sup is attained at a negative value.
  const double kappa = epsilon_target;
  const double slope_sup = sup_scaled_slope(profile, kappa);
  const double lambda = 4.0 / (kappa * slope_sup);
  if (lambda < 1.0)
    throw std::invalid_argument("epsilon_target too large for the requested profile");
  if (1.0 / lambda < 8.0 * (1.0 / n))
    throw std::invalid_argument(
        "epsilon_target unreachable: required lambda exceeds the grid resolution");

  CharacteristicState st;
  st.n = n;
  st.kappa = kappa;
  st.lambda = lambda;
  st.epsilon = kappa;  // sup f = 1
  const std::size_t m = st.samples();
  st.phi0.resize(m);
  st.p.assign(m, 0.0);
  st.v.resize(m);
  st.mu.resize(m);
  st.lbar_phi0_init.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double u = static_cast<double>(j) / n;
    const double s = lambda * (1.0 - u);  // x^1 = 1 - u at t = 0
    const double f = (s >= 0.0 && s <= 1.0) ? shock_profile(profile, s) : 0.0;
    const double fp = (s >= 0.0 && s <= 1.0) ? shock_profile_derivative(profile, s) : 0.0;
    st.phi0[j] = kappa * f;
    st.lbar_phi0_init[j] = -2.0 * kappa * lambda * fp / std::sqrt(1.0 + kappa * f);
    st.mu[j] = std::sqrt(1.0 + st.phi0[j]);
    st.v[j] = st.mu[j] * st.lbar_phi0_init[j];
  }
  return st;
}

ShockDerivative shock_rhs(const CharacteristicState& s, double mu_floor) {
  const std::size_t m = s.samples();
  const double du = s.du();
  ShockDerivative d;
  d.dphi0.resize(m);
  d.dp.resize(m);
  d.dv.resize(m);
  d.dmu.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double phi0 = s.phi0[j];
    const double p = s.p[j];
    const double v = s.v[j];
    const double mu = s.mu[j];
    const double g = 1.0 + phi0;
    if (!(g > 0.5))
      throw std::runtime_error("shock solver left its validity regime: 1 + phi0 <= 1/2");
    if (!(mu >= mu_floor))
      throw std::runtime_error("shock solver stepped below the mu floor");
    const double G = (phi0 / g) * (1.0 + 1.5 * phi0);
    // Data vanish for u <= 0; the ghost value below the lattice is zero.
    const double p_left = j > 0 ? s.p[j - 1] : 0.0;
    const double dup = (p - p_left) / du;

    d.dphi0[j] = p;
    d.dv[j] = -p * v / (2.0 * g) + mu * G * p + G * v;
    d.dp[j] = (-mu * p * p / (4.0 * g) - 3.0 * p * v / (4.0 * g) + mu * G * p + G * v -
               2.0 * dup) /
              mu;
    d.dmu[j] = (mu * p + v) / (4.0 * g);
  }
  return d;
}

namespace {

CharacteristicState state_plus(const CharacteristicState& s, double c,
                               const ShockDerivative& k) {
  CharacteristicState out = s;
  out.time = s.time + c;
  for (std::size_t j = 0; j < s.samples(); ++j) {
    out.phi0[j] += c * k.dphi0[j];
    out.p[j] += c * k.dp[j];
    out.v[j] += c * k.dv[j];
    out.mu[j] += c * k.dmu[j];
  }
  return out;
}

}  // namespace

std::string shock_status_name(ShockStatus s) {
  switch (s) {
    case ShockStatus::shock_captured: return "shock_captured";
    case ShockStatus::reached_t_max: return "reached_t_max";
    case ShockStatus::invariant_breach: return "invariant_breach";
    case ShockStatus::step_limit: return "step_limit";
  }
  return "unknown";
}

ShockReport run_shock(const CharacteristicState& initial, const ShockOptions& opts) {
  ShockReport report;
  report.epsilon = initial.epsilon;
  CharacteristicState state = initial;
  const double sqrt_eps = std::sqrt(std::max(initial.epsilon, 1e-300));
  const std::size_t m = state.samples();

  auto observe = [&](const CharacteristicState& s) {
    ShockRecord r;
    r.time = s.time;
    r.mu_min = s.mu[0];
    for (std::size_t j = 0; j < m; ++j) {
      r.mu_min = std::min(r.mu_min, s.mu[j]);
      r.sup_v = std::max(r.sup_v, std::fabs(s.v[j]));
      r.sup_v_over_mu = std::max(r.sup_v_over_mu, std::fabs(s.v[j] / s.mu[j]));
      r.sup_phi0 = std::max(r.sup_phi0, std::fabs(s.phi0[j]));
      r.sup_p = std::max(r.sup_p, std::fabs(s.p[j]));
      if (!(s.mu[j] > 0.0 && s.mu[j] <= 3.0)) ++r.range_violations;
      if (std::fabs(s.phi0[j]) > sqrt_eps) ++r.range_violations;
      if (std::fabs(s.p[j]) > sqrt_eps) ++r.range_violations;
      if (std::fabs(s.v[j]) > 5.0) ++r.range_violations;

      const double law = 1.0 + 0.25 * initial.lbar_phi0_init[j] * s.time;
      report.v_freezing_max =
          std::max(report.v_freezing_max, std::fabs(s.v[j] - initial.lbar_phi0_init[j]));
      report.mu_law_max = std::max(report.mu_law_max, std::fabs(s.mu[j] - law));
    }
    const double edge = std::fabs(s.phi0[0]) + std::fabs(s.p[0]) + std::fabs(s.v[0]) +
                        std::fabs(s.mu[0] - 1.0);
    report.vacuum_edge_max = std::max(report.vacuum_edge_max, edge);
    report.sup_phi0_overall = std::max(report.sup_phi0_overall, r.sup_phi0);
    report.sup_p_overall = std::max(report.sup_p_overall, r.sup_p);
    report.range_violations += r.range_violations;
    return r;
  };

  try {
    for (std::size_t step = 0;; ++step) {
      for (std::size_t j = 0; j < m; ++j)
        if (!std::isfinite(state.phi0[j]) || !std::isfinite(state.p[j]) ||
            !std::isfinite(state.v[j]) || !std::isfinite(state.mu[j]))
          throw std::runtime_error("non-finite value on the u-lattice");

      const ShockRecord rec = observe(state);
      report.records.push_back(rec);

      if (rec.mu_min <= opts.mu_floor) {
        report.status = ShockStatus::shock_captured;
        report.sup_v_over_mu_final = rec.sup_v_over_mu;
        break;
      }
      if (state.time >= opts.t_max - 1e-12) {
        report.status = ShockStatus::reached_t_max;
        report.sup_v_over_mu_final = rec.sup_v_over_mu;
        break;
      }
      if (step >= opts.max_steps) {
        report.status = ShockStatus::step_limit;
        break;
      }

      // Transport speed in u is 2/mu; the CFL bound tracks the stiffest point.
      double dt = opts.cfl * state.du() * rec.mu_min / 2.0;
      dt = std::min(dt, opts.t_max - state.time);
      report.records.back().dt = dt;

      const ShockDerivative k1 = shock_rhs(state, 0.5 * opts.mu_floor);
      CharacteristicState s2 = state_plus(state, 0.5 * dt, k1);
      const ShockDerivative k2 = shock_rhs(s2, 0.5 * opts.mu_floor);
      CharacteristicState s3 = state_plus(state, 0.5 * dt, k2);
      const ShockDerivative k3 = shock_rhs(s3, 0.5 * opts.mu_floor);
      CharacteristicState s4 = state_plus(state, dt, k3);
      const ShockDerivative k4 = shock_rhs(s4, 0.5 * opts.mu_floor);
      const double c = dt / 6.0;
      for (std::size_t j = 0; j < m; ++j) {
        state.phi0[j] += c * (k1.dphi0[j] + 2.0 * k2.dphi0[j] + 2.0 * k3.dphi0[j] + k4.dphi0[j]);
        state.p[j] += c * (k1.dp[j] + 2.0 * k2.dp[j] + 2.0 * k3.dp[j] + k4.dp[j]);
        state.v[j] += c * (k1.dv[j] + 2.0 * k2.dv[j] + 2.0 * k3.dv[j] + k4.dv[j]);
        state.mu[j] += c * (k1.dmu[j] + 2.0 * k2.dmu[j] + 2.0 * k3.dmu[j] + k4.dmu[j]);
      }
      state.time += dt;
    }
  } catch (const std::exception& e) {
    report.status = ShockStatus::invariant_breach;
    report.breach = e.what();
  }

  if (report.status == ShockStatus::shock_captured && report.records.size() >= 3) {
    std::vector<std::pair<double, double>> series;
    series.reserve(report.records.size());
    for (const auto& r : report.records) series.emplace_back(r.time, r.mu_min);
    const LifespanPrediction fit = lifespan_predict(series, 0.0);
    report.t_shock = fit.t_predicted;
    report.fit_slope = fit.slope;
  }
  return report;
}

}  // namespace rwave

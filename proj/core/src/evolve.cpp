#include "rwave/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rwave {

double stable_inverse_weight_product(double psi0, double ifact, const WeightFunction& w,
                                     double theta, double ifact_stop) {
  if (!(ifact > 0.0)) throw std::domain_error("integrating factor must be positive");
  const double y = psi0 / ifact;
  if (std::fabs(psi0) > theta) return y * eval_weight(w, y) / psi0;
  if (ifact < ifact_stop)
    throw std::runtime_error(
        "inverse-weight product ill-conditioned: ifact below stop threshold while psi0 "
        "is near zero");
  return eval_weight(w, y) / ifact;
}

StateDerivative regularized_rhs(const RenormalizedState& state, const WeightFunction& w,
                                const RhsOptions& opts) {
  const Grid& g = state.grid();
  const int d = state.dimension();
  const InitialData& data = *state.data;
  const std::size_t npts = state.psi0.size();

  ScalarField div(g);
  for (int a = 0; a < d; ++a)
    field_axpy(div, 1.0, partial_derivative(state.psi[static_cast<std::size_t>(a)], a,
                                            opts.accuracy_order));

  StateDerivative out;
  out.dpsi0 = ScalarField(g);
  out.difact = ScalarField(g);
  for (int a = 0; a < d; ++a)
    out.dpsi.push_back(partial_derivative(state.psi0, a, opts.accuracy_order));

  for (std::size_t i = 0; i < npts; ++i) {
    const double psi0 = state.psi0[i];
    const double ifact = state.ifact[i];
    if (!std::isfinite(psi0) || !std::isfinite(ifact))
      throw EvolveBreach("non-finite field value", state.time, i);
    if (!(ifact > 0.0))
      throw EvolveBreach("integrating factor is not positive", state.time, i);
    const double y = psi0 / ifact;
    if (!(y > opts.hyperbolicity_guard))
      throw EvolveBreach("hyperbolicity guard breached: psi0/ifact <= -0.45", state.time, i);

    const double wv = eval_weight(w, y);
    const double gprod = stable_inverse_weight_product(psi0, ifact, w, opts.theta,
                                                       opts.ifact_stop);
    double quad = 0.0;    // sum_a psi_a^2
    double mixed = 0.0;   // sum_a psi_ring_a psi_a
    for (int a = 0; a < d; ++a) {
      const double pa = state.psi[static_cast<std::size_t>(a)][i];
      quad += pa * pa;
      mixed += data.psi_init[static_cast<std::size_t>(a)][i] * pa;
    }
    out.dpsi0[i] = wv * div[i] + gprod * quad - wv * mixed;
    for (int a = 0; a < d; ++a)
      out.dpsi[static_cast<std::size_t>(a)][i] -=
          data.psi_init[static_cast<std::size_t>(a)][i] * psi0;
    out.difact[i] = -psi0;
  }
  return out;
}

namespace {

RenormalizedState state_plus(const RenormalizedState& s, double coeff,
                             const StateDerivative& k) {
  RenormalizedState out;
  out.time = s.time + coeff;
  out.psi0 = field_linear(s.psi0, coeff, k.dpsi0);
  out.ifact = field_linear(s.ifact, coeff, k.difact);
  out.psi.reserve(s.psi.size());
  for (std::size_t a = 0; a < s.psi.size(); ++a)
    out.psi.push_back(field_linear(s.psi[a], coeff, k.dpsi[a]));
  out.data = s.data;
  out.phi0_snapshot = s.phi0_snapshot;
  return out;
}

}  // namespace

RenormalizedState step_rk4(const RenormalizedState& state, double dt,
                           const WeightFunction& w, const RhsOptions& opts) {
  const StateDerivative k1 = regularized_rhs(state, w, opts);
  RenormalizedState s2 = state_plus(state, 0.5 * dt, k1);
  const StateDerivative k2 = regularized_rhs(s2, w, opts);
  RenormalizedState s3 = state_plus(state, 0.5 * dt, k2);
  const StateDerivative k3 = regularized_rhs(s3, w, opts);
  RenormalizedState s4 = state_plus(state, dt, k3);
  const StateDerivative k4 = regularized_rhs(s4, w, opts);

  RenormalizedState out = state;
  out.time = state.time + dt;
  const double c = dt / 6.0;
  const std::size_t npts = state.psi0.size();
  for (std::size_t i = 0; i < npts; ++i) {
    out.psi0[i] += c * (k1.dpsi0[i] + 2.0 * k2.dpsi0[i] + 2.0 * k3.dpsi0[i] + k4.dpsi0[i]);
    out.ifact[i] +=
        c * (k1.difact[i] + 2.0 * k2.difact[i] + 2.0 * k3.difact[i] + k4.difact[i]);
  }
  for (std::size_t a = 0; a < state.psi.size(); ++a)
    for (std::size_t i = 0; i < npts; ++i)
      out.psi[a][i] += c * (k1.dpsi[a][i] + 2.0 * k2.dpsi[a][i] + 2.0 * k3.dpsi[a][i] +
                            k4.dpsi[a][i]);
  return out;
}

std::string run_status_name(RunStatus s) {
  switch (s) {
    case RunStatus::captured_blowup: return "captured_blowup";
    case RunStatus::reached_t_max: return "reached_t_max";
    case RunStatus::reached_stop_time: return "reached_stop_time";
    case RunStatus::invariant_breach: return "invariant_breach";
    case RunStatus::step_limit: return "step_limit";
  }
  return "unknown";
}

namespace {

struct SliceStats {
  double ifact_min = 0.0;
  double sup_psi0 = 0.0;
  double max_psi0 = 0.0;  // signed max (for the step cap)
  double sup_dtphi = 0.0;
  double min_ratio = 0.0;
  double wmax = 0.0;
};

SliceStats slice_stats(const RenormalizedState& s, const WeightFunction& w) {
  SliceStats st;
  st.ifact_min = s.ifact[0];
  st.min_ratio = s.psi0[0] / s.ifact[0];
  st.sup_dtphi = st.min_ratio;
  st.max_psi0 = s.psi0[0];
  for (std::size_t i = 0; i < s.psi0.size(); ++i) {
    const double psi0 = s.psi0[i];
    const double ifact = s.ifact[i];
    const double ratio = psi0 / ifact;
    st.ifact_min = std::min(st.ifact_min, ifact);
    st.sup_psi0 = std::max(st.sup_psi0, std::fabs(psi0));
    st.max_psi0 = std::max(st.max_psi0, psi0);
    st.sup_dtphi = std::max(st.sup_dtphi, ratio);
    st.min_ratio = std::min(st.min_ratio, ratio);
    st.wmax = std::max(st.wmax, eval_weight(w, std::max(ratio, -0.499)));
  }
  return st;
}

DiagnosticsRecord make_record(const RenormalizedState& s, const WeightFunction& w,
                              const SliceStats& st, const RunOptions& opts,
                              double eps_ring, double a_star) {
  DiagnosticsRecord r;
  r.time = s.time;
  r.ifact_star = st.ifact_min;
  r.basic_energy = basic_energy(s, w);
  r.controlling_q = controlling_quantity(s, w, eps_ring, opts.k_max, opts.accuracy_order);
  r.sup_psi0 = st.sup_psi0;
  r.sup_dtphi = st.sup_dtphi;
  r.min_ratio = st.min_ratio;
  double sg = 0.0;
  for (int a = 0; a < s.dimension(); ++a)
    sg = std::max(sg, sup_norm(partial_derivative(s.psi0, a, opts.accuracy_order)));
  r.sup_grad_psi0 = sg;
  double sp = 0.0;
  for (const auto& pa : s.psi) sp = std::max(sp, sup_norm(pa));
  r.sup_psi_i = sp;

  const InitialData& data = *s.data;
  double drift = 0.0, law = 0.0;
  for (std::size_t i = 0; i < s.psi0.size(); ++i) {
    drift = std::max(drift, std::fabs(s.psi0[i] - data.psi0_init[i]));
    law = std::max(law, std::fabs(s.ifact[i] - (1.0 - s.time * data.psi0_init[i])));
  }
  r.sup_psi0_drift = drift;
  r.ifact_law_error = law;
  double grad_drift = 0.0;
  for (int a = 0; a < s.dimension(); ++a) {
    const ScalarField di = partial_derivative(s.ifact, a, opts.accuracy_order);
    const ScalarField& pa = s.psi[static_cast<std::size_t>(a)];
    const ScalarField& ra = data.psi_init[static_cast<std::size_t>(a)];
    for (std::size_t i = 0; i < di.size(); ++i)
      grad_drift = std::max(grad_drift, std::fabs(di[i] + pa[i] - s.ifact[i] * ra[i]));
  }
  r.ifact_gradient_drift = grad_drift;

  const ImplicationCounts counts = implication_monitor(s, a_star);
  r.implication_violations = counts.hard;
  r.implication_violations_soft = counts.soft;
  return r;
}

void validate_state(const RenormalizedState& s, double guard) {
  for (std::size_t i = 0; i < s.psi0.size(); ++i) {
    if (!std::isfinite(s.psi0[i]) || !std::isfinite(s.ifact[i]))
      throw EvolveBreach("non-finite field value", s.time, i);
    if (!(s.ifact[i] > 0.0))
      throw EvolveBreach("integrating factor is not positive", s.time, i);
    if (!(s.psi0[i] / s.ifact[i] > guard))
      throw EvolveBreach("hyperbolicity guard breached: psi0/ifact <= -0.45", s.time, i);
  }
  for (const auto& pa : s.psi)
    if (!pa.all_finite()) throw EvolveBreach("non-finite field value", s.time, 0);
}

}  // namespace

Trajectory run_regularized(std::shared_ptr<const InitialData> data,
                           const WeightFunction& w, const RunOptions& opts) {
  const double a_star = data->params.a_star;
  const double eps_ring = data->params.eps_ring;
  double t_max = opts.t_max;
  if (t_max <= 0.0) {
    if (a_star <= 0.0)
      throw std::invalid_argument("data with a_star = 0 needs an explicit t_max");
    t_max = 2.0 / a_star;
  }
  const double t_end = opts.stop_time > 0.0 ? std::min(opts.stop_time, t_max) : t_max;

  RhsOptions rhs_opts;
  rhs_opts.accuracy_order = opts.accuracy_order;
  rhs_opts.hyperbolicity_guard = opts.hyperbolicity_guard;
  rhs_opts.theta = a_star > 0.0 ? 1e-3 * a_star : 1e-3;
  rhs_opts.ifact_stop = opts.ifact_stop;

  Trajectory traj;
  traj.t_ode = a_star > 0.0 ? 1.0 / a_star : 0.0;
  RenormalizedState state = make_initial_state(data);
  RenormalizedState previous = state;
  bool have_previous = false;

  double friction_acc = 0.0;
  double indicator_acc = 0.0;
  std::int64_t sign_violations_acc = 0;
  std::size_t next_snapshot = 0;
  std::vector<double> snap_times = opts.snapshot_times;
  std::sort(snap_times.begin(), snap_times.end());
  const double h = state.grid().spacing();

  try {
    for (std::size_t step = 0;; ++step) {
      validate_state(state, opts.hyperbolicity_guard);
      const SliceStats st = slice_stats(state, w);

      DiagnosticsRecord rec = make_record(state, w, st, opts, eps_ring, a_star);
      rec.friction_accumulated = friction_acc;
      rec.indicator_friction_accumulated = indicator_acc;
      rec.friction_sign_violations = sign_violations_acc;
      if (have_previous)
        rec.energy_identity_residual =
            energy_identity_residual(previous, state, w, opts.accuracy_order);
      traj.records.push_back(rec);

      while (next_snapshot < snap_times.size() &&
             state.time >= snap_times[next_snapshot] - 1e-12) {
        traj.snapshots.push_back(state);
        ++next_snapshot;
      }

      if (st.ifact_min <= opts.ifact_stop) {
        traj.status = RunStatus::captured_blowup;
        break;
      }
      if (opts.stop_time > 0.0 && state.time >= opts.stop_time - 1e-12) {
        traj.status = RunStatus::reached_stop_time;
        break;
      }
      if (state.time >= t_end - 1e-12) {
        traj.status = RunStatus::reached_t_max;
        break;
      }
      if (step >= opts.max_steps) {
        traj.status = RunStatus::step_limit;
        break;
      }

      double dt;
      if (opts.dt_fixed > 0.0) {
        dt = opts.dt_fixed;
      } else {
        dt = opts.cfl * h / std::max(std::sqrt(st.wmax), 1.0);
        // Keep the integrating factor from crossing zero inside one step.
        if (st.max_psi0 > 0.0) dt = std::min(dt, 0.25 * st.ifact_min / st.max_psi0);
      }
      dt = std::min(dt, t_end - state.time);

      const FrictionIncrement inc =
          friction_step(state, w, dt, a_star, opts.friction_k, opts.accuracy_order);
      friction_acc += inc.friction;
      indicator_acc += inc.indicator_friction;
      sign_violations_acc += inc.sign_violations;

      previous = state;
      have_previous = true;
      state = step_rk4(state, dt, w, rhs_opts);
      traj.records.back().dt = dt;
    }
  } catch (const EvolveBreach& b) {
    traj.status = RunStatus::invariant_breach;
    traj.breach = std::string(b.what()) + " at t=" + std::to_string(b.time) +
                  ", flat index " + std::to_string(b.index);
  } catch (const std::runtime_error& e) {
    // e.g. the inverse-weight product losing both of its safe branches
    traj.status = RunStatus::invariant_breach;
    traj.breach = e.what();
  }

  if (traj.status == RunStatus::captured_blowup && traj.records.size() >= 3) {
    std::vector<std::pair<double, double>> series;
    series.reserve(traj.records.size());
    for (const auto& r : traj.records) series.emplace_back(r.time, r.ifact_star);
    const LifespanPrediction fit = lifespan_predict(series, a_star);
    traj.t_est = fit.t_predicted;
    traj.fit_slope = fit.slope;
  }
  traj.final_state = std::move(state);
  return traj;
}

PhiRecovery recover_phi(const RenormalizedState& state) {
  if (!state.phi0_snapshot)
    throw std::invalid_argument("phi recovery needs the initial potential snapshot");
  PhiRecovery out;
  out.phi = *state.phi0_snapshot;
  out.dphi_dt = ScalarField(state.grid());
  for (std::size_t i = 0; i < out.phi.size(); ++i) {
    const double ifact = state.ifact[i];
    if (!(ifact > 0.0))
      throw std::domain_error("phi recovery requires a positive integrating factor");
    out.phi[i] -= std::log(ifact);
    out.dphi_dt[i] = state.psi0[i] / ifact;
  }
  for (const auto& pa : state.psi) {
    ScalarField dxi(state.grid());
    for (std::size_t i = 0; i < dxi.size(); ++i) dxi[i] = pa[i] / state.ifact[i];
    out.dphi_dx.push_back(std::move(dxi));
  }
  return out;
}

namespace {

struct BaselineDerivative {
  ScalarField dphi;
  ScalarField du;
};

BaselineDerivative baseline_rhs(const BaselineState& s, const WeightFunction& w,
                                int order, double guard) {
  BaselineDerivative out;
  out.dphi = s.phidot;
  out.du = laplacian(s.phi, order);
  for (std::size_t i = 0; i < out.du.size(); ++i) {
    const double u = s.phidot[i];
    if (!(u > guard))
      throw EvolveBreach("baseline hyperbolicity guard breached", s.time, i);
    if (!std::isfinite(u)) throw EvolveBreach("non-finite field value", s.time, i);
    out.du[i] = eval_weight(w, u) * out.du[i] + u * u;
  }
  return out;
}

BaselineState baseline_plus(const BaselineState& s, double c, const BaselineDerivative& k) {
  BaselineState out;
  out.time = s.time + c;
  out.phi = field_linear(s.phi, c, k.dphi);
  out.phidot = field_linear(s.phidot, c, k.du);
  return out;
}

}  // namespace

BaselineTrajectory run_baseline(std::shared_ptr<const InitialData> data,
                                const WeightFunction& w, const BaselineOptions& opts) {
  const double a_star = data->params.a_star;
  double t_max = opts.t_max;
  if (t_max <= 0.0) {
    if (a_star <= 0.0)
      throw std::invalid_argument("data with a_star = 0 needs an explicit t_max");
    t_max = 2.0 / a_star;
  }

  BaselineTrajectory traj;
  BaselineState state = make_baseline_state(*data);
  const double h = state.phi.grid().spacing();

  try {
    for (std::size_t step = 0;; ++step) {
      if (!state.phi.all_finite() || !state.phidot.all_finite())
        throw EvolveBreach("non-finite field value", state.time, 0);

      BaselineRecord rec;
      rec.time = state.time;
      rec.sup_u = sup_norm(state.phidot);
      rec.l2_u = l2_norm(state.phidot);
      rec.seminorm2_u = seminorm_k(state.phidot, 2, opts.accuracy_order);
      traj.records.push_back(rec);

      if (rec.sup_u >= opts.u_blowup) {
        traj.status = BaselineStatus::captured_divergence;
        break;
      }
      if (state.time >= t_max - 1e-12) {
        traj.status = BaselineStatus::reached_t_max;
        break;
      }
      if (step >= opts.max_steps) {
        traj.status = BaselineStatus::dt_underflow;
        traj.breach = "step limit reached";
        break;
      }

      double wmax = 0.0;
      for (double u : state.phidot.values())
        wmax = std::max(wmax, eval_weight(w, std::max(u, -0.499)));
      double dt = opts.cfl * h / std::max(std::sqrt(wmax), 1.0);
      dt = std::min(dt, opts.ode_dt_safety / std::max(rec.sup_u, 1e-12));
      dt = std::min(dt, t_max - state.time);
      if (dt < 1e-12) {
        traj.status = BaselineStatus::dt_underflow;
        break;
      }
      traj.records.back().dt = dt;

      const BaselineDerivative k1 = baseline_rhs(state, w, opts.accuracy_order,
                                                 opts.hyperbolicity_guard);
      BaselineState s2 = baseline_plus(state, 0.5 * dt, k1);
      const BaselineDerivative k2 = baseline_rhs(s2, w, opts.accuracy_order,
                                                 opts.hyperbolicity_guard);
      BaselineState s3 = baseline_plus(state, 0.5 * dt, k2);
      const BaselineDerivative k3 = baseline_rhs(s3, w, opts.accuracy_order,
                                                 opts.hyperbolicity_guard);
      BaselineState s4 = baseline_plus(state, dt, k3);
      const BaselineDerivative k4 = baseline_rhs(s4, w, opts.accuracy_order,
                                                 opts.hyperbolicity_guard);
      const double c = dt / 6.0;
      for (std::size_t i = 0; i < state.phi.size(); ++i) {
        state.phi[i] += c * (k1.dphi[i] + 2.0 * k2.dphi[i] + 2.0 * k3.dphi[i] + k4.dphi[i]);
        state.phidot[i] += c * (k1.du[i] + 2.0 * k2.du[i] + 2.0 * k3.du[i] + k4.du[i]);
      }
      state.time += dt;
    }
  } catch (const EvolveBreach& b) {
    traj.status = BaselineStatus::invariant_breach;
    traj.breach = std::string(b.what()) + " at t=" + std::to_string(b.time);
  }
  traj.final_state = std::move(state);
  return traj;
}

}  // namespace rwave

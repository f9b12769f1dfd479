#include "rwave/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

namespace rwave {

namespace {

// Combinations of the weight and inverse powers of the integrating factor
// stay bounded up to the singularity, but only if they are evaluated through
// y = psi0/ifact where ifact is small (psi0 is bounded below there). Where
// ifact is of order one the direct quotient is fine.
struct WeightCombos {
  double y = 0.0;
  double wv = 0.0;  // w(y)
  double wp = 0.0;  // w'(y)
  double inv_ifact_w = 0.0;        // ifact^-1 w
  double inv_ifact_wp = 0.0;       // ifact^-1 w'
  double inv_ifact2_w_wp = 0.0;    // ifact^-2 w w'
};

WeightCombos weight_combos(double psi0, double ifact, const WeightFunction& w,
                           double theta) {
  WeightCombos c;
  c.y = psi0 / ifact;
  c.wv = eval_weight(w, c.y);
  c.wp = eval_weight_derivative(w, c.y);
  if (ifact < 0.25 && std::fabs(psi0) > theta) {
    c.inv_ifact_w = c.y * c.wv / psi0;
    c.inv_ifact_wp = c.y * c.wp / psi0;
    c.inv_ifact2_w_wp = c.y * c.y * c.wv * c.wp / (psi0 * psi0);
  } else {
    c.inv_ifact_w = c.wv / ifact;
    c.inv_ifact_wp = c.wp / ifact;
    c.inv_ifact2_w_wp = c.wv * c.wp / (ifact * ifact);
  }
  return c;
}

ScalarField weight_field(const RenormalizedState& s, const WeightFunction& w) {
  ScalarField out(s.grid());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = eval_weight(w, s.psi0[i] / s.ifact[i]);
  return out;
}

double integrate_product(const ScalarField& a, const ScalarField& b) {
  std::vector<double> prod(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) prod[i] = a[i] * b[i];
  return pairwise_sum(prod) * a.grid().cell_measure();
}

}  // namespace

double basic_energy_of(const ScalarField& v0, const std::vector<ScalarField>& v,
                       const RenormalizedState& state, const WeightFunction& w) {
  std::vector<double> integrand(v0.size());
  for (std::size_t i = 0; i < v0.size(); ++i) {
    double e = v0[i] * v0[i];
    const double wv = eval_weight(w, state.psi0[i] / state.ifact[i]);
    for (const auto& va : v) e += wv * va[i] * va[i];
    integrand[i] = e;
  }
  return pairwise_sum(integrand) * v0.grid().cell_measure();
}

double basic_energy(const RenormalizedState& state, const WeightFunction& w) {
  return basic_energy_of(state.psi0, state.psi, state, w);
}

double controlling_quantity(const RenormalizedState& state, const WeightFunction& w,
                            double eps_ring, int k_max, int order) {
  if (k_max < 2 || k_max > 5) throw std::invalid_argument("k_max must be in [2, 5]");
  const ScalarField wf = weight_field(state, w);

  double q = 0.0;
  for (int k = 2; k <= k_max; ++k) {
    q += integrate(grad_pow_sq(state.psi0, k, order));
    for (const auto& pa : state.psi)
      q += integrate_product(wf, grad_pow_sq(pa, k, order));
  }
  for (int k = 1; k <= k_max - 1; ++k)
    for (const auto& pa : state.psi) q += integrate(grad_pow_sq(pa, k, order));

  double low = integrate(grad_pow_sq(state.psi0, 1, order));
  for (const auto& pa : state.psi) low += integrate(grad_pow_sq(pa, 0, order));
  q += eps_ring * eps_ring * eps_ring * low;
  return q;
}

FrictionIncrement friction_step(const RenormalizedState& state, const WeightFunction& w,
                                double dt, double a_star, int k_order, int order) {
  FrictionIncrement inc;
  const double theta = 1e-3 * a_star;
  const double indicator_cut = 0.25 * std::min(1.0, a_star > 0.0 ? a_star : 1.0);
  const std::size_t npts = state.psi0.size();

  std::vector<double> fric(npts, 0.0);
  std::vector<double> ind(npts, 0.0);
  // Pointwise prefactors are k-independent; derivative magnitudes accumulate.
  std::vector<double> deriv_sq(npts, 0.0);
  for (const auto& pa : state.psi) {
    for (int k = 0; k <= k_order; ++k) {
      const ScalarField g = grad_pow_sq(pa, k, order);
      for (std::size_t i = 0; i < npts; ++i) deriv_sq[i] += g[i];
    }
  }
  for (std::size_t i = 0; i < npts; ++i) {
    const double psi0 = state.psi0[i];
    const double ifact = state.ifact[i];
    const double y = psi0 / ifact;
    const double wp = eval_weight_derivative(w, y);
    const double fac = y * y * wp;
    fric[i] = fac * deriv_sq[i];
    if (y >= 1.0 && fac > 0.0) ++inc.sign_violations;
    if (ifact <= indicator_cut) {
      const double singular = std::fabs(psi0) > theta
                                  ? y * y * std::fabs(wp) / (psi0 * psi0)
                                  : std::fabs(wp) / (ifact * ifact);
      ind[i] = singular * deriv_sq[i];
    }
  }
  const double measure = state.grid().cell_measure();
  inc.friction = dt * pairwise_sum(fric) * measure;
  inc.indicator_friction = dt * pairwise_sum(ind) * measure;
  return inc;
}

LifespanPrediction lifespan_predict(const std::vector<std::pair<double, double>>& series,
                                    double a_star) {
  if (series.size() < 3)
    throw std::invalid_argument("lifespan fit needs at least 3 samples");
  const std::size_t tail = std::max<std::size_t>(3, series.size() / 4);
  const std::size_t begin = series.size() - tail;
  for (std::size_t i = begin + 1; i < series.size(); ++i)
    if (!(series[i].second < series[i - 1].second))
      throw std::invalid_argument("lifespan fit requires a decreasing tail");

  double st = 0.0, sv = 0.0, stt = 0.0, stv = 0.0;
  for (std::size_t i = begin; i < series.size(); ++i) {
    const auto [t, v] = series[i];
    st += t;
    sv += v;
    stt += t * t;
    stv += t * v;
  }
  const double n = static_cast<double>(tail);
  const double denom = n * stt - st * st;
  if (denom == 0.0) throw std::invalid_argument("degenerate lifespan fit");
  LifespanPrediction out;
  out.slope = (n * stv - st * sv) / denom;
  out.intercept = (sv - out.slope * st) / n;
  if (!(out.slope < 0.0)) throw std::invalid_argument("lifespan fit slope is not negative");
  out.t_predicted = -out.intercept / out.slope;
  out.t_ode = a_star > 0.0 ? 1.0 / a_star : 0.0;
  return out;
}

double energy_identity_residual(const RenormalizedState& before,
                                const RenormalizedState& after,
                                const WeightFunction& w, int order) {
  const double dt = after.time - before.time;
  if (!(dt > 0.0)) throw std::invalid_argument("states must be adjacent in time");
  const InitialData& data = *before.data;
  const int d = before.dimension();

  // Midpoint state: second-order consistent location for the right-hand side.
  RenormalizedState mid;
  mid.time = 0.5 * (before.time + after.time);
  mid.psi0 = before.psi0;
  field_axpy(mid.psi0, 1.0, after.psi0);
  for (std::size_t i = 0; i < mid.psi0.size(); ++i) mid.psi0[i] *= 0.5;
  mid.ifact = before.ifact;
  field_axpy(mid.ifact, 1.0, after.ifact);
  for (std::size_t i = 0; i < mid.ifact.size(); ++i) mid.ifact[i] *= 0.5;
  for (int a = 0; a < d; ++a) {
    ScalarField f = before.psi[a];
    field_axpy(f, 1.0, after.psi[a]);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] *= 0.5;
    mid.psi.push_back(std::move(f));
  }
  mid.data = before.data;

  const double e0 = basic_energy(before, w);
  const double e1 = basic_energy(after, w);
  const double emid = basic_energy(mid, w);

  const std::size_t npts = mid.psi0.size();
  const double theta = 1e-3 * data.params.a_star;

  ScalarField div(mid.grid());
  for (int a = 0; a < d; ++a) field_axpy(div, 1.0, partial_derivative(mid.psi[a], a, order));
  std::vector<ScalarField> grad0(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) grad0[static_cast<std::size_t>(a)] =
      partial_derivative(mid.psi0, a, order);

  std::vector<double> rhs(npts);
  for (std::size_t i = 0; i < npts; ++i) {
    const double psi0 = mid.psi0[i];
    const double ifact = mid.ifact[i];
    const WeightCombos c = weight_combos(psi0, ifact, w, theta);

    double S = 0.0;      // sum_a psi_a^2
    double A = 0.0;      // sum_a psi_ring_a psi_a
    double T5 = 0.0;     // sum_a (d_a psi0) psi_a
    for (int a = 0; a < d; ++a) {
      const double pa = mid.psi[static_cast<std::size_t>(a)][i];
      S += pa * pa;
      A += data.psi_init[static_cast<std::size_t>(a)][i] * pa;
      T5 += grad0[static_cast<std::size_t>(a)][i] * pa;
    }
    const double y2wp = c.y * c.y * c.wp;
    const double f2 = c.inv_ifact_wp * c.wv;  // ifact^-1 w' w

    double r = y2wp * S;                       // friction term
    r += f2 * div[i] * S;
    r += c.inv_ifact2_w_wp * S * S;
    r -= f2 * A * S;
    r -= 2.0 * c.inv_ifact_wp * T5 * psi0;
    r -= 2.0 * y2wp * S;                       // ifact^-2 psi0 w' psi_a v_a v_0
    r += 2.0 * c.y * c.wp * A * psi0;          // ifact^-1 psi0 w' = y w'
    const double f0 = c.inv_ifact_w * S - c.wv * A;
    r += 2.0 * psi0 * f0;
    r += 2.0 * c.wv * (-A * psi0);             // sum_a w psi_a F_a, F_a = -psi_ring_a psi0
    rhs[i] = r;
  }
  const double rhs_total = pairwise_sum(rhs) * mid.grid().cell_measure();
  return std::fabs((e1 - e0) / dt - rhs_total) / (std::fabs(emid) + 1.0);
}

ImplicationCounts implication_monitor(const RenormalizedState& state, double a_star) {
  ImplicationCounts counts;
  const double tol = 1e-6 * std::max(1.0, a_star);
  for (std::size_t i = 0; i < state.psi0.size(); ++i) {
    const double ifact = state.ifact[i];
    const double psi0 = state.psi0[i];
    if (ifact <= 0.125 && psi0 < a_star / 8.0) ++counts.hard;
    if (ifact <= 0.25 && psi0 < a_star / 4.0 - tol) ++counts.soft;
  }
  return counts;
}

}  // namespace rwave

#include "rwave/weights.hpp"

#include <cmath>
#include <stdexcept>

namespace rwave {

namespace {

constexpr double kDomainCut = -0.5;
constexpr double kGuardBand = 1e-12;
constexpr double kTolerance = 1e-8;

void check_domain(double y) {
  if (!(y > kDomainCut + kGuardBand))
    throw std::domain_error("weight argument y must satisfy y > -1/2");
}

double int_pow(double x, int m) {
  double r = 1.0;
  for (int i = 0; i < m; ++i) r *= x;
  return r;
}

}  // namespace

WeightFunction WeightFunction::power_inverse(int M, double alpha_hint) {
  if (M < 1) throw std::invalid_argument("weight exponent M must be >= 1");
  return WeightFunction{WeightFamily::power_inverse, M, alpha_hint};
}

WeightFunction WeightFunction::power_shifted(int M, double alpha_hint) {
  if (M < 1) throw std::invalid_argument("weight exponent M must be >= 1");
  return WeightFunction{WeightFamily::power_shifted, M, alpha_hint};
}

WeightFunction WeightFunction::exponential(double alpha_hint) {
  return WeightFunction{WeightFamily::exponential, 1, alpha_hint};
}

std::string WeightFunction::name() const {
  switch (family) {
    case WeightFamily::power_inverse:
      return "power_inverse(" + std::to_string(exponent) + ")";
    case WeightFamily::power_shifted:
      return "power_shifted(" + std::to_string(exponent) + ")";
    case WeightFamily::exponential:
      return "exponential";
  }
  return "unknown";
}

double eval_weight(const WeightFunction& w, double y) {
  check_domain(y);
  switch (w.family) {
    case WeightFamily::power_inverse:
      return 1.0 / (1.0 + int_pow(y, w.exponent));
    case WeightFamily::power_shifted:
      return 1.0 / int_pow(1.0 + y, w.exponent);
    case WeightFamily::exponential:
      return std::exp(-y);
  }
  throw std::logic_error("unreachable weight family");
}

double eval_weight_derivative(const WeightFunction& w, double y) {
  check_domain(y);
  const int M = w.exponent;
  switch (w.family) {
    case WeightFamily::power_inverse: {
      const double den = 1.0 + int_pow(y, M);
      return -M * int_pow(y, M - 1) / (den * den);
    }
    case WeightFamily::power_shifted:
      return -M / int_pow(1.0 + y, M + 1);
    case WeightFamily::exponential:
      return -std::exp(-y);
  }
  throw std::logic_error("unreachable weight family");
}

namespace {

// --- iterated weighted derivative T^k[(1+y) w], T = (1+y)^2 d/dy ----------
//
// Expanding the operator gives T^k = sum_j Lah(k,j) (1+y)^{k+j} d^j/dy^j,
// and in the variable z = 1/(1+y) it is simply (-d/dz)^k. Both routes avoid
// the rounding blow-up of nested difference quotients: the shipped families
// use exact truncated-Taylor jets, the generic path uses jets filled by
// central differences with one Richardson refinement.

double lah_number(int k, int j) {
  // Lah(k,j) = binom(k-1, j-1) * k!/j!
  double binom = 1.0;
  for (int i = 1; i <= j - 1; ++i) binom *= static_cast<double>(k - i) / i;
  double ratio = 1.0;
  for (int i = j + 1; i <= k; ++i) ratio *= i;
  return binom * ratio;
}

// degree-5 truncated Taylor expansion around an evaluation point
struct Jet {
  std::array<double, 6> c{};

  static Jet constant(double v) {
    Jet j;
    j.c[0] = v;
    return j;
  }
  static Jet variable(double v) {
    Jet j;
    j.c[0] = v;
    j.c[1] = 1.0;
    return j;
  }
};

Jet operator+(const Jet& a, const Jet& b) {
  Jet r;
  for (int i = 0; i <= 5; ++i) r.c[i] = a.c[i] + b.c[i];
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  Jet r;
  for (int i = 0; i <= 5; ++i)
    for (int j = 0; i + j <= 5; ++j) r.c[i + j] += a.c[i] * b.c[j];
  return r;
}

Jet jet_pow(const Jet& a, int m) {
  Jet r = Jet::constant(1.0);
  for (int i = 0; i < m; ++i) r = r * a;
  return r;
}

Jet jet_recip(const Jet& a) {
  Jet r;
  r.c[0] = 1.0 / a.c[0];
  for (int n = 1; n <= 5; ++n) {
    double acc = 0.0;
    for (int i = 1; i <= n; ++i) acc += a.c[i] * r.c[n - i];
    r.c[n] = -acc / a.c[0];
  }
  return r;
}

// T^k[(1+y) w](y) for the closed-form families, via the z = 1/(1+y) chart
// where (1+y) w becomes a rational jet and T^k becomes (-d/dz)^k.
std::array<double, 6> iterated_bounds_closed_form(const WeightFunction& w, double y) {
  std::array<double, 6> out{};
  const double s = 1.0 + y;
  if (w.family == WeightFamily::exponential) {
    // y-chart expansion: d^j/dy^j [(1+y) e^{-y}] = (-1)^j (1+y-j) e^{-y}
    const double ey = std::exp(-y);
    for (int k = 0; k <= 5; ++k) {
      if (k == 0) {
        out[0] = s * ey;
        continue;
      }
      double acc = 0.0;
      double spow = std::pow(s, k + 1);
      for (int j = 1; j <= k; ++j) {
        const double hj = ((j % 2) ? -1.0 : 1.0) * (s - j) * ey;
        acc += lah_number(k, j) * spow * hj;
        spow *= s;
      }
      out[static_cast<std::size_t>(k)] = acc;
    }
    return out;
  }

  const double z0 = 1.0 / s;
  const Jet z = Jet::variable(z0);
  const Jet one_minus_z = Jet::constant(1.0) + Jet::constant(-1.0) * z;
  Jet h;
  if (w.family == WeightFamily::power_shifted) {
    // (1+y) w = z^{M-1}
    h = jet_pow(z, w.exponent - 1);
  } else {
    // (1+y) w = z^{M-1} / (z^M + (1-z)^M)
    h = jet_pow(z, w.exponent - 1) *
        jet_recip(jet_pow(z, w.exponent) + jet_pow(one_minus_z, w.exponent));
  }
  double kfact = 1.0;
  for (int k = 0; k <= 5; ++k) {
    if (k > 0) kfact *= k;
    const double sign = (k % 2) ? -1.0 : 1.0;
    out[static_cast<std::size_t>(k)] = sign * kfact * h.c[static_cast<std::size_t>(k)];
  }
  return out;
}

// j-th derivative estimates (j = 1..5) by symmetric differences at step d.
std::array<double, 6> difference_jets(const std::function<double(double)>& h, double y,
                                      double d) {
  std::array<double, 7> f{};
  for (int o = -3; o <= 3; ++o) f[static_cast<std::size_t>(o + 3)] = h(y + o * d);
  std::array<double, 6> out{};
  out[0] = f[3];
  out[1] = (f[4] - f[2]) / (2 * d);
  out[2] = (f[4] - 2 * f[3] + f[2]) / (d * d);
  out[3] = (f[5] - 2 * f[4] + 2 * f[2] - f[1]) / (2 * d * d * d);
  out[4] = (f[5] - 4 * f[4] + 6 * f[3] - 4 * f[2] + f[1]) / (d * d * d * d);
  out[5] = (f[6] - 4 * f[5] + 5 * f[4] - 5 * f[2] + 4 * f[1] - f[0]) /
           (2 * d * d * d * d * d);
  return out;
}

std::array<double, 6> iterated_bounds_generic(const std::function<double(double)>& w,
                                              double y) {
  auto h = [&w](double t) { return (1.0 + t) * w(t); };
  const double s = 1.0 + y;
  const double room = (y - kDomainCut) / 3.5;
  const double d = 0.02 * std::min(s, room);
  const std::array<double, 6> coarse = difference_jets(h, y, d);
  const std::array<double, 6> fine = difference_jets(h, y, 0.5 * d);
  std::array<double, 6> deriv{};
  for (int j = 0; j <= 5; ++j)
    deriv[static_cast<std::size_t>(j)] =
        (4.0 * fine[static_cast<std::size_t>(j)] - coarse[static_cast<std::size_t>(j)]) /
        3.0;

  std::array<double, 6> out{};
  out[0] = h(y);
  for (int k = 1; k <= 5; ++k) {
    double acc = 0.0;
    double spow = std::pow(s, k + 1);
    for (int j = 1; j <= k; ++j) {
      acc += lah_number(k, j) * spow * deriv[static_cast<std::size_t>(j)];
      spow *= s;
    }
    out[static_cast<std::size_t>(k)] = acc;
  }
  return out;
}

std::vector<double> log_spaced_samples(double y_max, int samples) {
  // Log-uniform in (y + 1/2), from just inside the guard band up to y_max.
  const double lo = 1e-6;
  const double hi = y_max - kDomainCut;
  std::vector<double> ys(samples);
  for (int j = 0; j < samples; ++j) {
    const double t = static_cast<double>(j) / (samples - 1);
    ys[j] = kDomainCut + lo * std::pow(hi / lo, t);
  }
  return ys;
}

}  // namespace

const AssumptionCheck* AdmissibilityReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

AdmissibilityReport certify_impl(
    const std::function<double(double)>& w, const std::function<double(double)>& wprime,
    const std::function<std::array<double, 6>(double)>& iterated_bounds,
    double alpha_hint, double y_max, int samples);

}  // namespace

AdmissibilityReport certify_weight(const std::function<double(double)>& w,
                                   const std::function<double(double)>& wprime,
                                   double alpha_hint, double y_max, int samples) {
  return certify_impl(w, wprime,
                      [&w](double y) { return iterated_bounds_generic(w, y); },
                      alpha_hint, y_max, samples);
}

namespace {

AdmissibilityReport certify_impl(
    const std::function<double(double)>& w, const std::function<double(double)>& wprime,
    const std::function<std::array<double, 6>(double)>& iterated_bounds,
    double alpha_hint, double y_max, int samples) {
  if (y_max < 2.0) throw std::invalid_argument("y_max must be >= 2");
  if (samples < 100) throw std::invalid_argument("samples must be >= 100");

  AdmissibilityReport report;
  const std::vector<double> ys = log_spaced_samples(y_max, samples);

  // positivity on (-1/2, y_max]
  {
    AssumptionCheck c{"positivity", true, ys.front(), ys.front(), ""};
    double wmin = w(ys.front());
    double at = ys.front();
    for (double y : ys) {
      const double v = w(y);
      if (v < wmin) {
        wmin = v;
        at = y;
      }
    }
    c.worst_value = wmin;
    c.worst_y = at;
    // strictly positive up to the stated tolerance; exp(-y) underflows to
    // zero in double precision near y = 745, which is not a violation
    c.passed = wmin > -kTolerance;
    if (!c.passed) c.detail = "w is not positive on the sampled domain";
    report.checks.push_back(c);
  }

  // normalization w(0) = 1
  {
    AssumptionCheck c{"normalization", true, w(0.0), 0.0, ""};
    c.passed = std::fabs(c.worst_value - 1.0) <= kTolerance;
    if (!c.passed) c.detail = "w(0) differs from 1";
    report.checks.push_back(c);
  }

  // non-positive derivative on [0, y_max]
  {
    AssumptionCheck c{"negative-derivative", true, 0.0, 0.0, ""};
    double worst = wprime(0.0);
    double at = 0.0;
    for (double y : ys) {
      if (y < 0.0) continue;
      const double v = wprime(y);
      if (v > worst) {
        worst = v;
        at = y;
      }
    }
    c.worst_value = worst;
    c.worst_y = at;
    c.passed = worst <= kTolerance;
    if (!c.passed) c.detail = "w' is positive somewhere on [0, y_max]";
    report.checks.push_back(c);
  }

  // boundedness of the iterated weighted derivatives of (1+y) w(y);
  // observed constants are recorded, finiteness is the pass condition.
  {
    AssumptionCheck c{"derivative-bounds", true, 0.0, 0.0, ""};
    for (double y : ys) {
      const std::array<double, 6> vals = iterated_bounds(y);
      for (int k = 0; k <= 5; ++k) {
        const double v = std::fabs(vals[static_cast<std::size_t>(k)]);
        if (!std::isfinite(v)) {
          c.passed = false;
          c.detail = "iterated derivative is not finite";
        }
        auto& ck = report.derivative_bounds[static_cast<std::size_t>(k)];
        if (v > ck) ck = v;
        if (v > c.worst_value) {
          c.worst_value = v;
          c.worst_y = y;
        }
      }
    }
    report.checks.push_back(c);
  }

  // comparison inequality w <= alpha |w'|^(1/2) on [1, y_max]
  {
    AssumptionCheck c{"comparison", true, 0.0, 1.0, ""};
    double alpha_min = 0.0;
    double at = 1.0;
    bool ok = true;
    auto visit = [&](double y) {
      const double wv = w(y);
      const double wp = std::fabs(wprime(y));
      if (wp == 0.0) {
        if (wv > kTolerance) ok = false;
        return;
      }
      const double ratio = wv / std::sqrt(wp);
      if (ratio > alpha_min) {
        alpha_min = ratio;
        at = y;
      }
      if (wv > alpha_hint * std::sqrt(wp) + kTolerance) ok = false;
    };
    visit(1.0);
    for (double y : ys)
      if (y > 1.0) visit(y);
    c.worst_value = alpha_min;
    c.worst_y = at;
    c.passed = ok;
    if (!ok) c.detail = "comparison inequality fails for the hinted alpha";
    report.minimal_alpha = alpha_min;
    report.checks.push_back(c);
  }

  report.passed = true;
  for (const auto& c : report.checks) report.passed = report.passed && c.passed;
  return report;
}

}  // namespace

AdmissibilityReport certify_weight(const WeightFunction& w, double y_max, int samples) {
  return certify_impl([&w](double y) { return eval_weight(w, y); },
                      [&w](double y) { return eval_weight_derivative(w, y); },
                      [&w](double y) { return iterated_bounds_closed_form(w, y); },
                      w.alpha_hint, y_max, samples);
}

}  // namespace rwave

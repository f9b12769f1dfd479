#include "rwave/fields.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace rwave {

std::size_t Grid::point_count() const {
  std::size_t c = 1;
  for (int a = 0; a < dimension; ++a) c *= static_cast<std::size_t>(points_per_axis);
  return c;
}

double Grid::cell_measure() const {
  double m = 1.0;
  for (int a = 0; a < dimension; ++a) m *= spacing();
  return m;
}

std::size_t Grid::axis_stride(int axis) const {
  std::size_t s = 1;
  for (int a = dimension - 1; a > axis; --a) s *= static_cast<std::size_t>(points_per_axis);
  return s;
}

double Grid::wrap_displacement(double a, double b) const {
  double d = a - b;
  const double L = domain_length;
  d -= L * std::floor(d / L + 0.5);
  return d;
}

Grid make_grid(int dimension, int points_per_axis, double domain_length) {
  if (dimension < 1 || dimension > 3)
    throw std::invalid_argument("grid dimension must be 1, 2 or 3");
  if (points_per_axis < 4)
    throw std::invalid_argument("points_per_axis must be at least 4");
  if (!(domain_length > 0.0))
    throw std::invalid_argument("domain_length must be positive");
  return Grid{dimension, points_per_axis, domain_length};
}

ScalarField::ScalarField(const Grid& grid, double fill)
    : grid_(grid), values_(grid.point_count(), fill) {}

bool ScalarField::all_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

int stencil_radius(int order) {
  if (order == 2) return 1;
  if (order == 4) return 2;
  throw std::invalid_argument("accuracy order must be 2 or 4");
}

namespace {

// Applies a (2r+1)-point periodic stencil along one axis.
// coeffs are ordered from offset -r to +r and already include the h scaling.
ScalarField apply_axis_stencil(const ScalarField& f, int axis,
                               std::span<const double> coeffs, int radius) {
  const Grid& g = f.grid();
  if (axis < 0 || axis >= g.dimension) throw std::invalid_argument("invalid axis");
  const int n = g.points_per_axis;
  const std::size_t stride = g.axis_stride(axis);
  const std::size_t block = stride * static_cast<std::size_t>(n);
  const std::size_t total = g.point_count();

  // Wrapped neighbor displacement (in flat-index units) per axis position.
  const int width = 2 * radius + 1;
  std::vector<std::ptrdiff_t> delta(static_cast<std::size_t>(width) * n);
  for (int o = -radius; o <= radius; ++o) {
    for (int i = 0; i < n; ++i) {
      int j = i + o;
      if (j < 0) j += n;
      if (j >= n) j -= n;
      delta[static_cast<std::size_t>(o + radius) * n + i] =
          (static_cast<std::ptrdiff_t>(j) - i) * static_cast<std::ptrdiff_t>(stride);
    }
  }

  ScalarField out(g);
  const double* src = f.values().data();
  double* dst = out.values().data();
  for (std::size_t base = 0; base < total; base += block) {
    for (int i = 0; i < n; ++i) {
      const std::size_t row = base + static_cast<std::size_t>(i) * stride;
      for (std::size_t inner = 0; inner < stride; ++inner) {
        const std::size_t p = row + inner;
        double acc = 0.0;
        for (int o = 0; o < width; ++o)
          acc += coeffs[o] * src[p + delta[static_cast<std::size_t>(o) * n + i]];
        dst[p] = acc;
      }
    }
  }
  return out;
}

}  // namespace

ScalarField partial_derivative(const ScalarField& f, int axis, int order) {
  const double h = f.grid().spacing();
  if (order == 2) {
    const double c[3] = {-0.5 / h, 0.0, 0.5 / h};
    return apply_axis_stencil(f, axis, c, 1);
  }
  if (order == 4) {
    const double c[5] = {1.0 / (12.0 * h), -8.0 / (12.0 * h), 0.0,
                         8.0 / (12.0 * h), -1.0 / (12.0 * h)};
    return apply_axis_stencil(f, axis, c, 2);
  }
  throw std::invalid_argument("accuracy order must be 2 or 4");
}

ScalarField laplacian(const ScalarField& f, int order) {
  const Grid& g = f.grid();
  const double h2 = g.spacing() * g.spacing();
  ScalarField out(g);
  for (int a = 0; a < g.dimension; ++a) {
    ScalarField d2;
    if (order == 2) {
      const double c[3] = {1.0 / h2, -2.0 / h2, 1.0 / h2};
      d2 = apply_axis_stencil(f, a, c, 1);
    } else if (order == 4) {
      const double c[5] = {-1.0 / (12.0 * h2), 16.0 / (12.0 * h2), -30.0 / (12.0 * h2),
                           16.0 / (12.0 * h2), -1.0 / (12.0 * h2)};
      d2 = apply_axis_stencil(f, a, c, 2);
    } else {
      throw std::invalid_argument("accuracy order must be 2 or 4");
    }
    field_axpy(out, 1.0, d2);
  }
  return out;
}

double sup_norm(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::fabs(v));
  return m;
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

double integrate(const ScalarField& f) {
  return pairwise_sum(f.values()) * f.grid().cell_measure();
}

double l2_norm(const ScalarField& f) {
  std::vector<double> sq(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) sq[i] = f[i] * f[i];
  return std::sqrt(pairwise_sum(sq) * f.grid().cell_measure());
}

namespace {

void check_seminorm_feasible(const Grid& g, int k, int order) {
  if (k < 0 || k > 5) throw std::invalid_argument("derivative order k must be in [0, 5]");
  if (k * stencil_radius(order) >= g.points_per_axis / 2)
    throw std::invalid_argument("k too large for grid: k * stencil radius must be < n/2");
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Enumerates multi-indices beta with |beta| = k as non-decreasing axis
// sequences, accumulating multiplicity * (d^beta f)^2 pointwise.
void accumulate_derivatives(const ScalarField& f, int level, int k, int min_axis,
                            std::array<int, 3>& beta, ScalarField& acc, int order) {
  if (level == k) {
    double mult = factorial(k);
    for (int a = 0; a < 3; ++a) mult /= factorial(beta[a]);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += mult * f[i] * f[i];
    return;
  }
  for (int a = min_axis; a < f.grid().dimension; ++a) {
    ScalarField df = partial_derivative(f, a, order);
    ++beta[a];
    accumulate_derivatives(df, level + 1, k, a, beta, acc, order);
    --beta[a];
  }
}

}  // namespace

ScalarField grad_pow_sq(const ScalarField& f, int k, int order) {
  check_seminorm_feasible(f.grid(), k, order);
  ScalarField acc(f.grid());
  std::array<int, 3> beta{0, 0, 0};
  accumulate_derivatives(f, 0, k, 0, beta, acc, order);
  return acc;
}

double seminorm_k(const ScalarField& f, int k, int order) {
  return std::sqrt(std::max(0.0, integrate(grad_pow_sq(f, k, order))));
}

double sobolev_norm(const ScalarField& f, int k, int order) {
  double s = 0.0;
  for (int j = 0; j <= k; ++j) {
    const double v = seminorm_k(f, j, order);
    s += v * v;
  }
  return std::sqrt(s);
}

double sup_grad_k(const ScalarField& f, int k, int order) {
  const ScalarField sq = grad_pow_sq(f, k, order);
  double m = 0.0;
  for (double v : sq.values()) m = std::max(m, v);
  return std::sqrt(m);
}

void field_axpy(ScalarField& y, double a, const ScalarField& x) {
  if (y.size() != x.size()) throw std::invalid_argument("field size mismatch");
  double* yp = y.values().data();
  const double* xp = x.values().data();
  for (std::size_t i = 0; i < y.size(); ++i) yp[i] += a * xp[i];
}

ScalarField field_linear(const ScalarField& x, double a, const ScalarField& y) {
  ScalarField out = x;
  field_axpy(out, a, y);
  return out;
}

}  // namespace rwave

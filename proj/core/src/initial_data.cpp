#include "rwave/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rwave {

BumpProfile bump_profile_from_name(const std::string& name) {
  if (name == "polynomial") return BumpProfile::polynomial;
  if (name == "gaussian") return BumpProfile::gaussian;
  throw std::invalid_argument("unknown bump profile: " + name);
}

std::string bump_profile_name(BumpProfile p) {
  return p == BumpProfile::polynomial ? "polynomial" : "gaussian";
}

namespace {

double int_pow(double x, int m) {
  double r = 1.0;
  for (int i = 0; i < m; ++i) r *= x;
  return r;
}

}  // namespace

double profile_value(BumpProfile p, double r) {
  const double r2 = r * r;
  if (r2 >= 1.0) return 0.0;
  switch (p) {
    case BumpProfile::polynomial: {
      const double q = 1.0 - r2;
      return q * q * q * q;
    }
    case BumpProfile::gaussian:
      return std::exp(-r2) * int_pow(1.0 - r2, 8);
  }
  return 0.0;
}

double profile_slope_over_r(BumpProfile p, double r) {
  const double r2 = r * r;
  if (r2 >= 1.0) return 0.0;
  switch (p) {
    case BumpProfile::polynomial: {
      const double q = 1.0 - r2;
      return -8.0 * q * q * q;
    }
    case BumpProfile::gaussian:
      return -2.0 * std::exp(-r2) * int_pow(1.0 - r2, 7) * (9.0 - r2);
  }
  return 0.0;
}

double profile_derivative(BumpProfile p, double r) {
  return r * profile_slope_over_r(p, r);
}

namespace {

int resolve_measure_order(int requested, int dimension) {
  if (requested == 2 || requested == 4) return requested;
  return dimension == 1 ? 4 : 2;
}

void check_psi0_floor(const ScalarField& psi0) {
  double mn = psi0.size() ? psi0[0] : 0.0;
  for (double v : psi0.values()) mn = std::min(mn, v);
  if (mn < -0.25)
    throw std::invalid_argument("initial psi0 violates the min >= -1/4 constraint");
}

void check_compact_support(const InitialData& data, const Grid& grid) {
  const int n = grid.points_per_axis;
  const double cx = grid.coordinate(n / 2);
  const double R = data.support_radius;
  auto scan = [&](const ScalarField& f) {
    const int d = grid.dimension;
    std::array<int, 3> idx{0, 0, 0};
    for (std::size_t p = 0; p < f.size(); ++p) {
      double r2 = 0.0;
      for (int a = 0; a < d; ++a) {
        const double dx = grid.wrap_displacement(grid.coordinate(idx[a]), cx);
        r2 += dx * dx;
      }
      if (r2 > R * R && std::fabs(f[p]) > 1e-14)
        throw std::invalid_argument("initial data leaks outside its stated support");
      for (int a = d - 1; a >= 0; --a) {
        if (++idx[a] < n) break;
        idx[a] = 0;
      }
    }
  };
  scan(data.psi0_init);
  for (const auto& f : data.psi_init) scan(f);
}

}  // namespace

InitialData make_bump_data(BumpProfile profile, double kappa, double lambda,
                           const Grid& grid, const BumpDataOptions& opts) {
  if (lambda < 1.0) throw std::invalid_argument("lambda must be >= 1");
  if (!(opts.spatial_radius > 0.0))
    throw std::invalid_argument("spatial_radius must be positive");
  const double support = std::max(lambda, opts.spatial_radius);
  if (2.0 * support >= grid.domain_length)
    throw std::invalid_argument("support overflow: bump does not fit inside the grid");

  const int n = grid.points_per_axis;
  const int d = grid.dimension;
  const double cx = grid.coordinate(n / 2);  // center on a lattice site

  auto radial = [&](const std::array<double, 3>& x, std::array<double, 3>& disp) {
    double r2 = 0.0;
    for (int a = 0; a < d; ++a) {
      disp[a] = grid.wrap_displacement(x[a], cx);
      r2 += disp[a] * disp[a];
    }
    return std::sqrt(r2);
  };

  InitialData data;
  data.psi0_init = field_from_function(grid, [&](const std::array<double, 3>& x) {
    std::array<double, 3> disp{};
    return kappa * profile_value(profile, radial(x, disp) / lambda);
  });
  check_psi0_floor(data.psi0_init);

  const double amp = opts.spatial_amplitude;
  const double R = opts.spatial_radius;
  data.phi0 = field_from_function(grid, [&](const std::array<double, 3>& x) {
    std::array<double, 3> disp{};
    return (amp / lambda) * profile_value(profile, radial(x, disp) / R);
  });
  data.psi_init.reserve(d);
  for (int i = 0; i < d; ++i) {
    data.psi_init.push_back(field_from_function(grid, [&](const std::array<double, 3>& x) {
      std::array<double, 3> disp{};
      const double r = radial(x, disp);
      return (amp / (lambda * R * R)) * profile_slope_over_r(profile, r / R) * disp[i];
    }));
  }

  data.compactly_supported = true;
  data.support_radius = support;
  check_compact_support(data, grid);
  data.params = measure_parameters(data, grid, resolve_measure_order(opts.measure_order, d));
  return data;
}

InitialData homogeneous_data(double delta, const Grid& grid) {
  if (!(delta > -0.25))
    throw std::invalid_argument("homogeneous data requires delta > -1/4");
  InitialData data;
  data.psi0_init = ScalarField(grid, delta);
  for (int i = 0; i < grid.dimension; ++i) data.psi_init.emplace_back(grid, 0.0);
  data.phi0 = ScalarField(grid, 0.0);
  data.compactly_supported = false;
  data.support_radius = 0.0;
  data.params.eps_ring = 0.0;
  data.params.a_ring = std::fabs(delta);
  data.params.a_star = std::max(delta, 0.0);
  data.params.ratio_eps_times_a = 0.0;
  data.params.ratio_eps_over_astar = 0.0;
  return data;
}

InitialData data_from_fields(ScalarField psi0, std::vector<ScalarField> psi,
                             ScalarField phi0, int measure_order) {
  const Grid grid = psi0.grid();
  if (static_cast<int>(psi.size()) != grid.dimension)
    throw std::invalid_argument("expected one spatial-derivative field per axis");
  for (const auto& f : psi)
    if (!(f.grid() == grid)) throw std::invalid_argument("field grids differ");
  if (!(phi0.grid() == grid)) throw std::invalid_argument("field grids differ");
  check_psi0_floor(psi0);

  InitialData data;
  data.psi0_init = std::move(psi0);
  data.psi_init = std::move(psi);
  data.phi0 = std::move(phi0);
  data.compactly_supported = false;
  data.support_radius = 0.0;
  data.params = measure_parameters(data, grid,
                                   resolve_measure_order(measure_order, grid.dimension));
  return data;
}

DataSizeParams measure_parameters(const InitialData& data, const Grid& grid, int order) {
  if (!(data.psi0_init.grid() == grid))
    throw std::invalid_argument("data does not live on the given grid");
  DataSizeParams p;

  double base = 0.0;
  for (const auto& psi_i : data.psi_init) {
    for (int k = 0; k <= 2; ++k) base = std::max(base, sup_grad_k(psi_i, k, order));
    base = std::max(base, sobolev_norm(psi_i, 5, order));
  }
  for (int k = 1; k <= 3; ++k)
    base = std::max(base, sup_grad_k(data.psi0_init, k, order));
  double hess_h3 = 0.0;
  for (int k = 2; k <= 5; ++k) {
    const double v = seminorm_k(data.psi0_init, k, order);
    hess_h3 += v * v;
  }
  base = std::max(base, std::sqrt(hess_h3));

  // The eps^{3/2}-weighted gradient term depends on eps itself; two
  // fixed-point passes starting from the unweighted terms resolve it.
  const double grad_psi0_l2 = seminorm_k(data.psi0_init, 1, order);
  double eps = base;
  for (int pass = 0; pass < 2; ++pass)
    eps = std::max(base, std::pow(eps, 1.5) * grad_psi0_l2);
  p.eps_ring = eps;

  p.a_ring = sup_norm(data.psi0_init);
  double mx = 0.0;
  for (double v : data.psi0_init.values()) mx = std::max(mx, v);
  p.a_star = mx;

  p.ratio_eps_times_a = p.eps_ring * p.a_ring;
  p.ratio_eps_over_astar = p.a_star > 0.0 ? p.eps_ring / p.a_star : 0.0;
  return p;
}

}  // namespace rwave

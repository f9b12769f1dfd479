#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace rwave {

/// Uniform periodic Cartesian lattice in d = 1, 2 or 3 dimensions.
/// Indexing is row-major with axis 0 slowest; index arithmetic wraps.
struct Grid {
  int dimension = 1;
  int points_per_axis = 0;
  double domain_length = 0.0;  // per axis

  double spacing() const { return domain_length / points_per_axis; }
  std::size_t point_count() const;
  double cell_measure() const;  // spacing^dimension
  std::size_t axis_stride(int axis) const;

  /// Coordinate of lattice site `i` along `axis`, in [0, domain_length).
  double coordinate(int i) const { return i * spacing(); }

  /// Shortest periodic displacement from b to a.
  double wrap_displacement(double a, double b) const;

  bool operator==(const Grid&) const = default;
};

Grid make_grid(int dimension, int points_per_axis, double domain_length);

/// Dense real-valued samples on a Grid. All values must stay finite;
/// NaN/Inf signals solver breakdown and is treated as a hard error.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Grid& grid, double fill = 0.0);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  bool all_finite() const;

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Samples fn(x) at every lattice site; fn receives the coordinates
/// (unused trailing entries are zero).
template <typename Fn>
ScalarField field_from_function(const Grid& grid, Fn&& fn) {
  ScalarField out(grid);
  const int n = grid.points_per_axis;
  const int d = grid.dimension;
  std::array<int, 3> idx{0, 0, 0};
  for (std::size_t p = 0; p < out.size(); ++p) {
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int a = 0; a < d; ++a) x[a] = grid.coordinate(idx[a]);
    out[p] = fn(x);
    for (int a = d - 1; a >= 0; --a) {
      if (++idx[a] < n) break;
      idx[a] = 0;
    }
  }
  return out;
}

/// Centered periodic first-derivative stencil along `axis`.
/// `order` is the accuracy order, 2 or 4.
ScalarField partial_derivative(const ScalarField& f, int axis, int order);

/// Sum of one-dimensional second-derivative stencils.
ScalarField laplacian(const ScalarField& f, int order);

int stencil_radius(int order);

double sup_norm(const ScalarField& f);

/// Deterministic fixed-order pairwise sum (reproducible reductions).
double pairwise_sum(std::span<const double> v);

/// Discrete integral: pairwise sum of samples times spacing^d.
double integrate(const ScalarField& f);

/// sqrt( sum values^2 * spacing^d )
double l2_norm(const ScalarField& f);

/// Pointwise squared magnitude of the array of all k-th order partial
/// derivatives, |grad^k f|^2, counting mixed derivatives with multinomial
/// multiplicity. k = 0 returns f^2.
ScalarField grad_pow_sq(const ScalarField& f, int k, int order);

/// l2 norm of the k-th derivative array; seminorm_k(f, 0) == l2_norm(f).
double seminorm_k(const ScalarField& f, int k, int order);

/// sqrt( sum_{j<=k} seminorm_j^2 )
double sobolev_norm(const ScalarField& f, int k, int order);

double sup_grad_k(const ScalarField& f, int k, int order);

// In-place field arithmetic used by the integrators.
void field_axpy(ScalarField& y, double a, const ScalarField& x);  // y += a*x
ScalarField field_linear(const ScalarField& x, double a, const ScalarField& y);  // x + a*y

}  // namespace rwave

#pragma once

#include <string>
#include <vector>

#include "rwave/fields.hpp"

namespace rwave {

/// Radial bump profiles, supported in r <= 1 with maximum 1 at r = 0.
/// polynomial: (1 - r^2)^4, three continuous derivatives at the support edge;
/// gaussian:   exp(-r^2) (1 - r^2)^8, a Gaussian under a high-order cutoff
///             with seven continuous derivatives, for high-order stencils
///             and derivative measurements up to fifth order.
enum class BumpProfile { polynomial, gaussian };

BumpProfile bump_profile_from_name(const std::string& name);
std::string bump_profile_name(BumpProfile p);

double profile_value(BumpProfile p, double r);
double profile_derivative(BumpProfile p, double r);
/// P'(r)/r, finite at r = 0; used to evaluate gradients of radial bumps.
double profile_slope_over_r(BumpProfile p, double r);

/// Measured size parameters of a data set: eps_ring bounds the spatial
/// derivative norms, a_ring = sup |psi0|, and a_star = max of the positive
/// part of psi0 (1/a_star approximates the blowup time).
struct DataSizeParams {
  double eps_ring = 0.0;
  double a_ring = 0.0;
  double a_star = 0.0;
  // Smallness ratios reported for monitoring (never enforced here).
  double ratio_eps_times_a = 0.0;
  double ratio_eps_over_astar = 0.0;
};

/// Initial values (psi0 = time derivative, psi[i] = i-th spatial derivative
/// of the potential) plus the potential itself for later reconstruction.
struct InitialData {
  ScalarField psi0_init;
  std::vector<ScalarField> psi_init;  // one field per spatial axis
  ScalarField phi0;                   // potential with grad(phi0) = psi_init
  DataSizeParams params;
  bool compactly_supported = true;
  double support_radius = 0.0;  // radius about the grid center, 0 if not compact
};

struct BumpDataOptions {
  double spatial_amplitude = 0.05;  // amplitude of the (undilated) potential
  double spatial_radius = 1.0;      // support radius of the potential bump
  int measure_order = 0;            // stencil order for parameter measurement;
                                    // 0 selects 4 in 1D and 2 otherwise
};

/// Dilated bump family: psi0(x) = kappa * P(|x - c|/lambda) and
/// psi_i(x) = lambda^{-1} * d_i chi(x) for a fixed potential bump chi.
/// Enlarging lambda shrinks the measured eps_ring while a_ring and a_star
/// stay fixed.
InitialData make_bump_data(BumpProfile profile, double kappa, double lambda,
                           const Grid& grid, const BumpDataOptions& opts = {});

/// Spatially constant data psi0 = delta, psi_i = 0. Not compactly supported;
/// gives the exact solver-level reduction to the scalar blowup ODE.
InitialData homogeneous_data(double delta, const Grid& grid);

/// Data loaded from field snapshots (see io.hpp for the format).
InitialData data_from_fields(ScalarField psi0, std::vector<ScalarField> psi,
                             ScalarField phi0, int measure_order = 0);

/// Measures eps_ring / a_ring / a_star from the sampled fields. The weighted
/// eps^{3/2} term is resolved with two fixed-point passes. Reports, never
/// rejects.
DataSizeParams measure_parameters(const InitialData& data, const Grid& grid,
                                  int order = 2);

}  // namespace rwave

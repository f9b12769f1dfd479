#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "rwave/fields.hpp"
#include "rwave/initial_data.hpp"

namespace rwave {

/// One time level of the regularized system: psi0 = ifact * d_t phi,
/// psi[i] = ifact * d_i phi, and the integrating factor ifact itself
/// (ifact == 1 and psi == initial data at t = 0). The frozen initial data
/// enter the evolution as coefficients and are shared, not copied.
struct RenormalizedState {
  double time = 0.0;
  ScalarField psi0;
  std::vector<ScalarField> psi;
  ScalarField ifact;
  std::shared_ptr<const InitialData> data;
  std::optional<ScalarField> phi0_snapshot;

  int dimension() const { return static_cast<int>(psi.size()); }
  const Grid& grid() const { return psi0.grid(); }
};

RenormalizedState make_initial_state(std::shared_ptr<const InitialData> data,
                                     bool keep_phi0 = true);

/// Raw-variable time level for the unrenormalized solver: phi and
/// phidot = d_t phi. phidot must stay above the hyperbolicity guard.
struct BaselineState {
  double time = 0.0;
  ScalarField phi;
  ScalarField phidot;
};

BaselineState make_baseline_state(const InitialData& data);

}  // namespace rwave

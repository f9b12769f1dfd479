#include "rwave/state.hpp"

#include <stdexcept>

namespace rwave {

RenormalizedState make_initial_state(std::shared_ptr<const InitialData> data,
                                     bool keep_phi0) {
  if (!data) throw std::invalid_argument("initial data must not be null");
  RenormalizedState s;
  s.time = 0.0;
  s.psi0 = data->psi0_init;
  s.psi = data->psi_init;
  s.ifact = ScalarField(s.psi0.grid(), 1.0);
  if (keep_phi0) s.phi0_snapshot = data->phi0;
  s.data = std::move(data);
  return s;
}

BaselineState make_baseline_state(const InitialData& data) {
  BaselineState s;
  s.time = 0.0;
  s.phi = data.phi0;
  s.phidot = data.psi0_init;
  return s;
}

}  // namespace rwave

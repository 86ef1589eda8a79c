#pragma once
#include <cstddef>
#include <vector>

#include "hydroblow/pde.hpp"

namespace hydroblow {

struct particle_set {
  std::vector<double> positions;  // strictly increasing
  std::vector<double> values;
  double time = 0;
  long steps = 0;
};

// Lagrangian oracle: dZ_i/dt = int_0^{Z_i} a, da_i/dt = a_i^2 - 2 int_0^1 a^2,
// nonlocal integrals by trapezoid over the moving particle mesh. Particles are
// seeded at the nodes of f0. Throws when particle ordering is violated.
particle_set integrate_characteristics(const field& f0, std::size_t n_particles,
                                       double t_end, const solver_config& cfg);

// Sup over the overlap of |field reconstructed from ps - f|; times must agree.
double compare_to_eulerian(const particle_set& ps, const field& f);

}  // namespace hydroblow

#pragma once

#include "rmopt/manifold.hpp"
#include "rmopt/rsdfo.hpp"

#include <vector>

namespace rmopt {

struct PsoConfig {
  double nostalgia = 1.4;
  double social = 1.4;
  double inertia_start = 0.9;
  double inertia_end = 0.4;
  long long planned_iterations = 1;  // horizon of the linear inertia ramp
};

struct PsoParticle {
  ManifoldPoint position;
  TangentVector velocity;  // anchored at position
  ManifoldPoint best_point;
  double best_value = std::numeric_limits<double>::infinity();
};

struct PsoSwarm {
  std::vector<PsoParticle> particles;
  ManifoldPoint global_best_point;
  double global_best_value = std::numeric_limits<double>::infinity();
  long long iteration = 0;
  long long log_failures = 0;  // nostalgia/social terms zeroed for lack of a log
};

/// Linear inertia ramp from inertia_start at k = 0 down to inertia_end.
double pso_inertia(const PsoConfig& config, long long k);

/// Builds a swarm from initial positions with zero velocities; evaluates f at
/// every position to seed the personal and global bests.
PsoSwarm make_swarm(const Manifold& M, const std::vector<ManifoldPoint>& positions,
                    const ObjectiveFn& f);

/// One synchronous swarm update (minimization). Per particle, with alpha and
/// beta uniform in [0,1]:
///   v <- w_k * v + c * alpha * log_x(personal best) + s * beta * log_x(global best)
/// where log is the manifold's heuristic_log; a term whose log is undefined is
/// zeroed and counted. The position moves along exp with the step clipped to
/// 0.95 * injectivity radius and the velocity is parallel transported to the
/// new position. The global best is snapshotted before any particle moves.
void pso_step(const Manifold& M, PsoSwarm& swarm, const ObjectiveFn& f,
              const PsoConfig& config, Rng& rng);

}  // namespace rmopt

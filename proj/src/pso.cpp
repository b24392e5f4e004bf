#include "rmopt/pso.hpp"

#include <cmath>
#include <stdexcept>

namespace rmopt {

double pso_inertia(const PsoConfig& config, long long k) {
  if (config.planned_iterations <= 1) return config.inertia_end;
  const double t = std::min(1.0, static_cast<double>(k) /
                                     static_cast<double>(config.planned_iterations - 1));
  return config.inertia_start + t * (config.inertia_end - config.inertia_start);
}

PsoSwarm make_swarm(const Manifold& M, const std::vector<ManifoldPoint>& positions,
                    const ObjectiveFn& f) {
  if (positions.empty()) throw std::invalid_argument("make_swarm: no particles");
  PsoSwarm swarm;
  swarm.particles.reserve(positions.size());
  for (const auto& x : positions) {
    PsoParticle p;
    p.position = x;
    p.velocity = TangentVector{x, Eigen::VectorXd::Zero(M.tangent_size())};
    p.best_point = x;
    p.best_value = f(x);
    if (p.best_value < swarm.global_best_value) {
      swarm.global_best_value = p.best_value;
      swarm.global_best_point = x;
    }
    swarm.particles.push_back(std::move(p));
  }
  return swarm;
}

namespace {

Eigen::VectorXd log_term(const Manifold& M, const ManifoldPoint& x,
                         const ManifoldPoint& target, long long* failures) {
  try {
    return M.heuristic_log(x, target).rep;
  } catch (const std::domain_error&) {
    if (failures) ++*failures;
    return Eigen::VectorXd::Zero(M.tangent_size());
  }
}

}  // namespace

void pso_step(const Manifold& M, PsoSwarm& swarm, const ObjectiveFn& f,
              const PsoConfig& config, Rng& rng) {
  const double w = pso_inertia(config, swarm.iteration);
  // Snapshot: all particles react to the same global best of this iteration.
  const ManifoldPoint global_best = swarm.global_best_point;

  for (auto& p : swarm.particles) {
    const double alpha = rng.uniform();
    const double beta = rng.uniform();

    Eigen::VectorXd v = w * p.velocity.rep;
    v += config.nostalgia * alpha * log_term(M, p.position, p.best_point, &swarm.log_failures);
    v += config.social * beta * log_term(M, p.position, global_best, &swarm.log_failures);

    const double limit = 0.95 * M.injectivity_radius(p.position);
    const double n = v.norm();
    if (n > limit) v *= limit / n;

    const TangentVector step{p.position, v};
    const ManifoldPoint moved = M.exp(p.position, step);
    p.velocity = M.parallel_transport(p.position, moved, step);
    p.position = moved;

    const double value = f(p.position);
    if (value < p.best_value) {
      p.best_value = value;
      p.best_point = p.position;
    }
  }

  for (const auto& p : swarm.particles) {
    if (p.best_value < swarm.global_best_value) {
      swarm.global_best_value = p.best_value;
      swarm.global_best_point = p.best_point;
    }
  }
  ++swarm.iteration;
}

}  // namespace rmopt

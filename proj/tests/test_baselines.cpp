#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "euclidean_refs.hpp"
#include "rmopt/jacobs_ladder.hpp"
#include "rmopt/pso.hpp"
#include "rmopt/sphere.hpp"
#include "rmopt/trust_region.hpp"

#include <cmath>

using namespace rmopt;

TEST_CASE("steihaug cg: interior Newton step on a convex model") {
  Eigen::Matrix2d h;
  h << 4.0, 1.0, 1.0, 3.0;
  const Eigen::Vector2d g(1.0, -2.0);
  const Eigen::VectorXd eta = steihaug_cg(g, h, 100.0);
  CHECK((h * eta + g).norm() < 1e-8);
}

TEST_CASE("steihaug cg: boundary step under negative curvature") {
  Eigen::Matrix2d h;
  h << -1.0, 0.0, 0.0, -2.0;
  const Eigen::Vector2d g(1.0, 0.0);
  const Eigen::VectorXd eta = steihaug_cg(g, h, 0.5);
  CHECK(eta.norm() == doctest::Approx(0.5).epsilon(1e-10));
}

namespace {

// Quadratic objective in the chart of a fixed anchor point on S^2.
struct ChartQuadratic {
  const SphereManifold& s2;
  ManifoldPoint anchor;
  OrthonormalFrame frame;
  Eigen::Matrix2d h;
  Eigen::Vector2d center;
  double offset = 0.0;

  double operator()(const ManifoldPoint& p) const {
    const Eigen::VectorXd u = frame.coords(s2.log(anchor, p));
    return 0.5 * (u - center).dot(h * (u - center)) + offset;
  }
};

}  // namespace

TEST_CASE("rtr: one step reaches a chart quadratic minimizer inside the radius") {
  SphereManifold s2(2);
  ManifoldPoint x{ManifoldId::Sphere, Eigen::Vector3d(0, 0, 1)};
  Rng frng(61);
  const OrthonormalFrame frame = orthonormal_frame(s2, x, frng);

  Eigen::Matrix2d h;
  h << 3.0, 0.4, 0.4, 2.0;
  const ChartQuadratic quad{s2, x, frame, h, Eigen::Vector2d(0.05, -0.03), 1.0};

  RtrConfig config;
  RtrState state = make_rtr_state(x, config);
  Rng rng(62);
  const RtrState next = rtr_step(s2, state, quad, config, rng);

  CHECK(next.last_accepted);
  // FD derivatives are exact on quadratics up to roundoff, so the CG step is
  // the Newton step and lands on the chart minimizer.
  CHECK(quad(next.x) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(s2.distance(next.x, s2.exp(x, frame.vector(quad.center.eval()))) < 1e-5);
}

TEST_CASE("rtr: decisions are invariant under constant objective shifts") {
  SphereManifold s2(2);
  ManifoldPoint x{ManifoldId::Sphere, Eigen::Vector3d(1, 0, 0)};
  const auto base = [](const ManifoldPoint& p) {
    return std::sin(2.0 * p.coords[0]) + p.coords[1] * p.coords[1];
  };
  const auto shifted = [&](const ManifoldPoint& p) { return base(p) + 10.0; };

  RtrConfig config;
  RtrState sa = make_rtr_state(x, config);
  RtrState sb = make_rtr_state(x, config);
  Rng ra(63), rb(63);
  for (int i = 0; i < 5; ++i) {
    sa = rtr_step(s2, sa, base, config, ra);
    sb = rtr_step(s2, sb, shifted, config, rb);
    CHECK(sa.last_accepted == sb.last_accepted);
    CHECK(sa.last_rho == doctest::Approx(sb.last_rho).epsilon(1e-6));
    CHECK(sa.delta == doctest::Approx(sb.delta).epsilon(1e-12));
    CHECK(sa.x.coords.isApprox(sb.x.coords, 1e-9));
  }
}

TEST_CASE("rtr: trust radius never exceeds the cap and stencils are counted") {
  SphereManifold s2(2);
  ManifoldPoint x{ManifoldId::Sphere, Eigen::Vector3d(0, 1, 0)};
  long long evals = 0;
  const auto f = [&evals](const ManifoldPoint& p) {
    ++evals;
    return p.coords[2];
  };

  RtrConfig config;
  RtrState state = make_rtr_state(x, config);
  Rng rng(64);
  for (int i = 0; i < 12 && !state.converged; ++i) {
    const long long before = evals;
    state = rtr_step(s2, state, f, config, rng);
    CHECK(state.delta <= config.delta_bar + 1e-15);
    const long long used = evals - before;
    // f(x), 2*dim gradient stencils, 2*dim^2 Hessian stencils, plus the
    // candidate evaluation when the model decreased.
    CHECK(used >= 1 + 2 * 2 + 2 * 2 * 2);
    CHECK(used <= 1 + 2 * 2 + 2 * 2 * 2 + 1);
  }
}

TEST_CASE("pso: stationary when velocity and coefficients vanish") {
  SphereManifold s2(2);
  ManifoldPoint x{ManifoldId::Sphere, Eigen::Vector3d(0, 0, 1)};
  const auto f = [](const ManifoldPoint& p) { return p.coords[0]; };

  PsoSwarm swarm = make_swarm(s2, {x}, f);
  // Single particle sitting on its own personal == global best: both log
  // terms vanish, so only inertia acts on a zero velocity.
  PsoConfig config;
  config.planned_iterations = 10;
  Rng rng(65);
  pso_step(s2, swarm, f, config, rng);
  CHECK(swarm.particles[0].position.coords.isApprox(x.coords, 1e-15));
  CHECK(swarm.particles[0].velocity.norm() == 0.0);
}

TEST_CASE("pso: global best is non-increasing") {
  SphereManifold s2(2);
  const auto f = [](const ManifoldPoint& p) { return p.coords[0] + 2.0 * p.coords[1]; };

  Rng init(66);
  std::vector<ManifoldPoint> positions;
  for (int i = 0; i < 8; ++i) {
    Eigen::VectorXd v = init.normal_vector(3);
    v.normalize();
    positions.push_back(ManifoldPoint{ManifoldId::Sphere, v});
  }
  PsoSwarm swarm = make_swarm(s2, positions, f);
  PsoConfig config;
  config.planned_iterations = 40;
  Rng rng(67);
  double prev = swarm.global_best_value;
  for (int k = 0; k < 40; ++k) {
    pso_step(s2, swarm, f, config, rng);
    CHECK(swarm.global_best_value <= prev + 1e-15);
    prev = swarm.global_best_value;
  }
}

TEST_CASE("pso: flat-chart equivalence with the Euclidean reference") {
  SphereManifold s2(2);
  ManifoldPoint pole{ManifoldId::Sphere, Eigen::Vector3d(0, 0, 1)};
  Rng frng(68);
  const OrthonormalFrame frame = orthonormal_frame(s2, pole, frng);

  const auto f_chart = [](const Eigen::VectorXd& u) {
    return (u - Eigen::Vector2d(4e-4, -2e-4)).squaredNorm();
  };
  const auto f_manifold = [&](const ManifoldPoint& p) {
    return f_chart(frame.coords(s2.log(pole, p)));
  };

  // Tiny chart offsets so curvature effects stay far below the tolerance.
  std::vector<Eigen::Vector2d> offsets = {{1e-4, 2e-4}, {-3e-4, 1e-4}, {2e-4, -2e-4}};
  std::vector<ManifoldPoint> positions;
  std::vector<euclid::PsoParticle> ref;
  for (const auto& u : offsets) {
    positions.push_back(s2.exp(pole, frame.vector(u)));
    ref.push_back({u, Eigen::Vector2d::Zero(), u});
  }

  PsoSwarm swarm = make_swarm(s2, positions, f_manifold);
  // Mirror the personal/global best bookkeeping for the reference swarm.
  Eigen::Vector2d ref_best = offsets[0];
  double ref_best_value = f_chart(offsets[0]);
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double v = f_chart(ref[i].position);
    if (v < ref_best_value) {
      ref_best_value = v;
      ref_best = ref[i].position;
    }
  }

  PsoConfig config;
  config.planned_iterations = 5;
  const double w = pso_inertia(config, 0);

  Rng rng_m(69), rng_r(69);
  std::vector<double> alpha, beta;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    alpha.push_back(rng_r.uniform());
    beta.push_back(rng_r.uniform());
  }

  pso_step(s2, swarm, f_manifold, config, rng_m);
  euclid::pso_step(ref, ref_best, w, config.nostalgia, config.social, alpha, beta);

  for (std::size_t i = 0; i < ref.size(); ++i) {
    const Eigen::VectorXd u = frame.coords(s2.log(pole, swarm.particles[i].position));
    CHECK((u - ref[i].position).lpNorm<Eigen::Infinity>() < 1e-6);
  }
}

TEST_CASE("pso: ladder communication uses the heuristic log") {
  JacobsLadderManifold jl;
  const auto f = [&jl](const ManifoldPoint& p) {
    return static_cast<double>(std::abs(jl.torus_index(p)));
  };
  // Particle on torus 2 whose global best sits on torus 0: too far for the
  // heuristic log, so both pull terms vanish and it only drifts by inertia.
  std::vector<ManifoldPoint> positions = {jl.point(0, 1.0, 1.0), jl.point(2, 0.5, 0.5)};
  PsoSwarm swarm = make_swarm(jl, positions, f);
  PsoConfig config;
  config.planned_iterations = 3;
  Rng rng(70);
  pso_step(jl, swarm, f, config, rng);
  CHECK(swarm.particles[1].position.coords.isApprox(positions[1].coords, 1e-12));
}

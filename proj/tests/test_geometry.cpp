#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rmopt/grassmann.hpp"
#include "rmopt/jacobs_ladder.hpp"
#include "rmopt/sphere.hpp"

#include <cmath>
#include <memory>
#include <vector>

using namespace rmopt;

namespace {

ManifoldPoint random_point(const Manifold& M, Rng& rng) {
  switch (M.id()) {
    case ManifoldId::Sphere: {
      Eigen::VectorXd v = rng.normal_vector(M.point_size());
      v.normalize();
      return ManifoldPoint{ManifoldId::Sphere, v};
    }
    case ManifoldId::Grassmann: {
      const auto& G = dynamic_cast<const GrassmannManifold&>(M);
      Eigen::MatrixXd a(G.n(), G.p());
      for (Eigen::Index j = 0; j < G.p(); ++j) a.col(j) = rng.normal_vector(G.n());
      return G.point(orthonormalize_columns(std::move(a)));
    }
    case ManifoldId::JacobsLadder: {
      const auto& L = dynamic_cast<const JacobsLadderManifold&>(M);
      const long long torus = static_cast<long long>(rng.below(11)) - 5;
      return L.point(torus, rng.uniform() * kTwoPi, rng.uniform() * kTwoPi);
    }
  }
  throw std::logic_error("unreachable");
}

TangentVector random_tangent(const Manifold& M, const ManifoldPoint& x, double max_norm,
                             Rng& rng) {
  const OrthonormalFrame f = orthonormal_frame(M, x, rng);
  Eigen::VectorXd z = rng.normal_vector(M.dim());
  const double target = max_norm * rng.uniform();
  if (z.norm() > 0) z *= target / z.norm();
  return f.vector(z);
}

}  // namespace

TEST_CASE("sphere exp basics") {
  SphereManifold s2(2);
  ManifoldPoint x{ManifoldId::Sphere, Eigen::Vector3d(1, 0, 0)};

  TangentVector zero{x, Eigen::Vector3d::Zero()};
  CHECK(s2.exp(x, zero).coords.isApprox(x.coords, 1e-15));

  TangentVector quarter{x, Eigen::Vector3d(0, kPi / 2, 0)};
  CHECK(s2.exp(x, quarter).coords.isApprox(Eigen::Vector3d(0, 1, 0), 1e-12));

  TangentVector half{x, Eigen::Vector3d(0, kPi, 0)};
  CHECK(s2.exp(x, half).coords.isApprox(Eigen::Vector3d(-1, 0, 0), 1e-12));

  TangentVector full{x, Eigen::Vector3d(0, kTwoPi, 0)};
  CHECK(s2.exp(x, full).coords.isApprox(x.coords, 1e-12));
}

TEST_CASE("sphere log and distance basics") {
  SphereManifold s2(2);
  ManifoldPoint x{ManifoldId::Sphere, Eigen::Vector3d(1, 0, 0)};
  ManifoldPoint y{ManifoldId::Sphere, Eigen::Vector3d(0, 1, 0)};

  CHECK(s2.log(x, x).rep.norm() == doctest::Approx(0.0).epsilon(1e-14));
  const TangentVector v = s2.log(x, y);
  CHECK(v.rep.norm() == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK(v.rep.normalized().isApprox(Eigen::Vector3d(0, 1, 0), 1e-12));

  CHECK(s2.distance(x, x) == 0.0);
  CHECK(s2.distance(x, y) == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK(s2.injectivity_radius(x) == doctest::Approx(kPi));

  ManifoldPoint antipode{ManifoldId::Sphere, Eigen::Vector3d(-1, 0, 0)};
  CHECK_THROWS_AS((void)s2.log(x, antipode), std::domain_error);
}

TEST_CASE("grassmann representative invariance and identity cases") {
  GrassmannManifold gr(2, 4);
  ManifoldPoint x = gr.identity_point();
  CHECK(gr.is_member(x));
  CHECK(gr.injectivity_radius(x) == doctest::Approx(kPi / 2));

  // Right-multiplication by an orthogonal 2x2 matrix keeps the span.
  Eigen::Matrix2d q;
  const double a = 0.3;
  q << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  ManifoldPoint xq = gr.point(gr.unflatten(x.coords) * q);
  CHECK(gr.distance(x, xq) == doctest::Approx(0.0).epsilon(1e-12));

  TangentVector zero{x, Eigen::VectorXd::Zero(8)};
  CHECK(gr.distance(gr.exp(x, zero), x) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("grassmann orthogonal 1-planes in Gr(1,2)") {
  GrassmannManifold gr(1, 2);
  Eigen::MatrixXd e1(2, 1), e2(2, 1);
  e1 << 1, 0;
  e2 << 0, 1;
  CHECK(gr.distance(gr.point(e1), gr.point(e2)) == doctest::Approx(kPi / 2).epsilon(1e-12));
}

TEST_CASE("grassmann span equivariance of exp") {
  GrassmannManifold gr(2, 4);
  Rng rng(71);
  ManifoldPoint x = random_point(gr, rng);
  TangentVector v = random_tangent(gr, x, 1.0, rng);

  Eigen::Matrix2d q;
  q << std::cos(1.1), -std::sin(1.1), std::sin(1.1), std::cos(1.1);
  const Eigen::MatrixXd xm = gr.unflatten(x.coords);
  const Eigen::MatrixXd vm = gr.unflatten(v.rep);
  // The same subspace motion expressed through the rotated representative.
  const Eigen::MatrixXd y1 = grassmann_exp(xm, vm);
  const Eigen::MatrixXd y2 = grassmann_exp(xm * q, vm * q);
  CHECK(grassmann_distance(y1, y2) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("ladder exp development") {
  JacobsLadderManifold jl;  // R = 2, r = 0.5
  const double r = jl.minor_radius();
  const double R = jl.major_radius();

  ManifoldPoint x = jl.point(0, 0.0, 0.0);
  TangentVector zero{x, Eigen::Vector2d::Zero()};
  CHECK(jl.exp(x, zero).coords.isApprox(x.coords, 1e-15));

  // Pure minor motion stays on the torus.
  TangentVector minor{x, Eigen::Vector2d(r * 1.2, 0.0)};
  ManifoldPoint y = jl.exp(x, minor);
  CHECK(jl.torus_index(y) == 0);
  CHECK(jl.decode(y).theta == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(jl.decode(y).phi == doctest::Approx(0.0).epsilon(1e-12));

  // Major motion of 2pi + 0.1 crosses into the next torus.
  TangentVector major{x, Eigen::Vector2d(0.0, R * (kTwoPi + 0.1))};
  ManifoldPoint z = jl.exp(x, major);
  CHECK(jl.torus_index(z) == 1);
  CHECK(jl.decode(z).phi == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(jl.decode(z).theta == doctest::Approx(0.0).epsilon(1e-12));

  // Negative-direction crossing decrements the index.
  TangentVector back{x, Eigen::Vector2d(0.0, -R * 0.2)};
  ManifoldPoint w = jl.exp(x, back);
  CHECK(jl.torus_index(w) == -1);
  CHECK(jl.decode(w).phi == doctest::Approx(kTwoPi - 0.2).epsilon(1e-9));
}

TEST_CASE("ladder distance and log") {
  JacobsLadderManifold jl;
  const double r = jl.minor_radius();

  ManifoldPoint x = jl.point(0, 0.3, 1.0);
  CHECK(jl.distance(x, x) == 0.0);

  // Half minor circle on the same torus.
  ManifoldPoint y = jl.point(0, 0.3 + kPi, 1.0);
  CHECK(jl.distance(x, y) == doctest::Approx(kPi * r).epsilon(1e-12));
  CHECK(jl.injectivity_radius(x) == doctest::Approx(kPi * r));
  CHECK_THROWS_AS((void)jl.log(x, y), std::domain_error);
}

TEST_CASE("ladder heuristic log") {
  JacobsLadderManifold jl;
  ManifoldPoint x = jl.point(0, 1.0, 2.0);

  CHECK(jl.heuristic_log(x, x).rep.norm() == 0.0);

  ManifoldPoint up = jl.point(1, 0.2, 0.4);
  const TangentVector vu = jl.heuristic_log(x, up);
  CHECK(vu.rep.isApprox(Eigen::Vector2d(0, 1), 1e-15));

  ManifoldPoint down = jl.point(-1, 0.2, 0.4);
  CHECK(jl.heuristic_log(x, down).rep.isApprox(Eigen::Vector2d(0, -1), 1e-15));

  ManifoldPoint far = jl.point(3, 0.2, 0.4);
  CHECK(jl.heuristic_log(x, far).rep.norm() == 0.0);

  // Same torus: product development, both angles wrapped.
  ManifoldPoint same = jl.point(0, 1.4, 1.5);
  const TangentVector vs = jl.heuristic_log(x, same);
  CHECK(vs.rep[0] == doctest::Approx(jl.minor_radius() * 0.4).epsilon(1e-12));
  CHECK(vs.rep[1] == doctest::Approx(jl.major_radius() * -0.5).epsilon(1e-12));
}

TEST_CASE("exp/log roundtrip and transport isometry across manifolds") {
  std::vector<std::shared_ptr<Manifold>> manifolds = {
      std::make_shared<SphereManifold>(2),
      std::make_shared<SphereManifold>(5),
      std::make_shared<GrassmannManifold>(2, 4),
      std::make_shared<GrassmannManifold>(2, 5),
      std::make_shared<JacobsLadderManifold>(),
  };

  for (const auto& mp : manifolds) {
    const Manifold& M = *mp;
    Rng rng(derive_seed(2024, static_cast<std::uint64_t>(M.dim()), M.point_size()));
    INFO("manifold ", M.name());
    for (int trial = 0; trial < 200; ++trial) {
      const ManifoldPoint x = random_point(M, rng);
      REQUIRE(M.is_member(x));
      const double inj = M.injectivity_radius(x);
      const TangentVector v = random_tangent(M, x, 0.9 * inj, rng);

      const ManifoldPoint y = M.exp(x, v);
      CHECK(M.is_member(y, 1e-9));

      // Geodesic ball == metric ball.
      CHECK(M.distance(x, y) == doctest::Approx(v.norm()).epsilon(0).scale(1).epsilon(1e-8));

      // Roundtrip.
      const TangentVector back = M.log(x, y);
      CHECK((back.rep - v.rep).norm() < 1e-8);

      // Transport preserves inner products along the geodesic.
      const TangentVector w1 = random_tangent(M, x, 1.0, rng);
      const TangentVector w2 = random_tangent(M, x, 1.0, rng);
      const TangentVector t1 = M.parallel_transport(x, y, w1);
      const TangentVector t2 = M.parallel_transport(x, y, w2);
      CHECK(M.is_tangent(t1, 1e-9));
      CHECK(std::abs(t1.rep.dot(t2.rep) - w1.rep.dot(w2.rep)) < 1e-9);

      // Transported frames remain orthonormal.
      const OrthonormalFrame f = orthonormal_frame(M, x, rng);
      const OrthonormalFrame g = transport_frame(M, f, y);
      const Eigen::MatrixXd gram = g.basis.transpose() * g.basis;
      CHECK((gram - Eigen::MatrixXd::Identity(M.dim(), M.dim())).norm() < 1e-9);
    }
  }
}

TEST_CASE("frames are orthonormal and deterministic under seeding") {
  SphereManifold s2(2);
  ManifoldPoint x{ManifoldId::Sphere, Eigen::Vector3d(0, 0, 1)};

  Rng a(9), b(9);
  const OrthonormalFrame fa = orthonormal_frame(s2, x, a);
  const OrthonormalFrame fb = orthonormal_frame(s2, x, b);
  CHECK(fa.basis == fb.basis);

  // Tangent to the base point.
  CHECK((fa.basis.transpose() * x.coords).norm() < 1e-12);

  const Eigen::MatrixXd gram = fa.basis.transpose() * fa.basis;
  CHECK((gram - Eigen::Matrix2d::Identity()).norm() < 1e-9);
}

TEST_CASE("frame gram identity over random points on each manifold") {
  std::vector<std::shared_ptr<Manifold>> manifolds = {
      std::make_shared<SphereManifold>(3),
      std::make_shared<GrassmannManifold>(2, 5),
      std::make_shared<JacobsLadderManifold>(),
  };
  for (const auto& mp : manifolds) {
    const Manifold& M = *mp;
    Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
      const ManifoldPoint x = random_point(M, rng);
      const OrthonormalFrame f = orthonormal_frame(M, x, rng);
      const Eigen::MatrixXd gram = f.basis.transpose() * f.basis;
      CHECK((gram - Eigen::MatrixXd::Identity(M.dim(), M.dim())).norm() < 1e-9);
    }
  }
}

TEST_CASE("transport roundtrip x -> y -> x restores vectors") {
  std::vector<std::shared_ptr<Manifold>> manifolds = {
      std::make_shared<SphereManifold>(2),
      std::make_shared<GrassmannManifold>(2, 4),
      std::make_shared<JacobsLadderManifold>(),
  };
  for (const auto& mp : manifolds) {
    const Manifold& M = *mp;
    Rng rng(55);
    for (int trial = 0; trial < 50; ++trial) {
      const ManifoldPoint x = random_point(M, rng);
      const TangentVector v = random_tangent(M, x, 0.8 * M.injectivity_radius(x), rng);
      const ManifoldPoint y = M.exp(x, v);
      const TangentVector w = random_tangent(M, x, 1.0, rng);
      const TangentVector back = M.parallel_transport(y, x, M.parallel_transport(x, y, w));
      CHECK((back.rep - w.rep).norm() < 1e-9);
    }
  }
}

TEST_CASE("ladder roundtrip within the injectivity ball crosses junctions") {
  JacobsLadderManifold jl;
  Rng rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const ManifoldPoint x = random_point(jl, rng);
    const TangentVector v = random_tangent(jl, x, 0.999 * jl.injectivity_radius(x), rng);
    const ManifoldPoint y = jl.exp(x, v);
    const TangentVector back = jl.log(x, y);
    CHECK((back.rep - v.rep).norm() < 1e-8);
    CHECK(jl.distance(x, y) == doctest::Approx(v.norm()).epsilon(1e-10));
  }
}

TEST_CASE("torus index after junction crossings") {
  JacobsLadderManifold jl;
  ManifoldPoint x = jl.point(4, 0.5, 6.0);
  CHECK(jl.torus_index(x) == 4);

  // Crossing rightward: phi = 6.0 plus 0.5 passes 2pi.
  TangentVector fwd{x, Eigen::Vector2d(0.0, jl.major_radius() * 0.5)};
  CHECK(jl.torus_index(jl.exp(x, fwd)) == 5);

  ManifoldPoint z = jl.point(4, 0.5, 0.1);
  TangentVector bwd{z, Eigen::Vector2d(0.0, -jl.major_radius() * 0.3)};
  CHECK(jl.torus_index(jl.exp(z, bwd)) == 3);
}

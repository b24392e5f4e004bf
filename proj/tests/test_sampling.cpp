#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rmopt/grassmann.hpp"
#include "rmopt/jacobs_ladder.hpp"
#include "rmopt/sphere.hpp"

#include <cmath>

using namespace rmopt;

TEST_CASE("truncated gaussian: norms bounded, concentration, determinism") {
  SphereManifold s2(2);
  ManifoldPoint x{ManifoldId::Sphere, Eigen::Vector3d(0, 0, 1)};
  Rng frng(3);
  const OrthonormalFrame frame = orthonormal_frame(s2, x, frng);
  const Eigen::MatrixXd cov = Eigen::Matrix2d::Identity();
  const double radius = 1.5;

  SUBCASE("all norms within the ball") {
    Rng rng(11);
    for (int i = 0; i < 2000; ++i) {
      const TangentVector v =
          sample_truncated_gaussian(s2, x, frame, cov, 2.5, radius, rng);
      CHECK(v.norm() <= radius + 1e-12);
      CHECK(s2.is_tangent(v, 1e-9));
    }
  }

  SUBCASE("sigma -> 0 concentrates at the origin") {
    Rng rng(12);
    const double sigma = radius / 1000.0;
    double acc = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i)
      acc += sample_truncated_gaussian(s2, x, frame, cov, sigma, radius, rng).norm();
    CHECK(acc / n < radius / 100.0);
  }

  SUBCASE("seeded repeatability") {
    Rng a(77), b(77);
    for (int i = 0; i < 20; ++i) {
      const TangentVector va = sample_truncated_gaussian(s2, x, frame, cov, 1.0, radius, a);
      const TangentVector vb = sample_truncated_gaussian(s2, x, frame, cov, 1.0, radius, b);
      CHECK(va.rep == vb.rep);
    }
  }
}

TEST_CASE("truncated gaussian: empirical covariance in the untruncated regime") {
  // sigma small relative to the ball, anisotropic covariance.
  Eigen::Matrix2d cov;
  cov << 2.0, 0.6, 0.6, 1.0;
  const double sigma = 0.05;
  const double radius = 2.0;
  const Eigen::MatrixXd a = symmetric_sqrt(cov);

  Rng rng(13);
  const int n = 100000;
  Eigen::Matrix2d acc = Eigen::Matrix2d::Zero();
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd z = sample_truncated_gaussian_coords(a, sigma, radius, rng);
    acc += z * z.transpose();
  }
  acc /= n;
  const Eigen::Matrix2d expected = sigma * sigma * cov;
  CHECK((acc - expected).norm() / expected.norm() < 0.05);
}

TEST_CASE("truncated gaussian: fallback path keeps samples inside the ball") {
  Eigen::MatrixXd cov = Eigen::Matrix2d::Identity();
  const Eigen::MatrixXd a = symmetric_sqrt(cov);
  TruncatedSampleStats stats;
  Rng rng(5);
  // sigma vastly larger than the ball: rejection will exhaust its budget.
  for (int i = 0; i < 50; ++i) {
    const Eigen::VectorXd z =
        sample_truncated_gaussian_coords(a, 1e6, 1e-3, rng, &stats);
    CHECK(z.norm() <= 1e-3 + 1e-15);
  }
  CHECK(stats.fallbacks > 0);
}

TEST_CASE("geodesic sphere sampling: distance contract and uniformity") {
  SphereManifold s2(2);
  ManifoldPoint x{ManifoldId::Sphere, Eigen::Vector3d(1, 0, 0)};

  SUBCASE("distance equals the requested radius") {
    Rng rng(21);
    const double r = 0.7;
    for (int i = 0; i < 1000; ++i) {
      const ManifoldPoint y = sample_geodesic_sphere(s2, x, r, rng);
      CHECK(std::abs(s2.distance(x, y) - r) < 1e-8);
    }
  }

  SUBCASE("radius == injectivity radius is still valid") {
    Rng rng(22);
    const ManifoldPoint y = sample_geodesic_sphere(s2, x, s2.injectivity_radius(x), rng);
    CHECK(std::abs(s2.distance(x, y) - kPi) < 1e-8);
  }

  SUBCASE("directions are uniform on the tangent circle") {
    Rng frng(23);
    const OrthonormalFrame frame = orthonormal_frame(s2, x, frng);
    Rng rng(24);
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
      const ManifoldPoint y = sample_geodesic_sphere(s2, frame, 0.9, rng);
      mean += frame.coords(s2.log(x, y)).normalized();
    }
    CHECK((mean / n).norm() < 0.02);
  }

  SUBCASE("radius above the injectivity radius is rejected") {
    Rng rng(25);
    CHECK_THROWS_AS((void)sample_geodesic_sphere(s2, x, kPi + 0.1, rng), std::invalid_argument);
  }
}

TEST_CASE("floor_spd repairs tiny eigenvalues and counts them") {
  Eigen::Matrix2d c;
  c << 1.0, 0.0, 0.0, -1e-9;
  long long repairs = 0;
  const Eigen::MatrixXd fixed = floor_spd(c, 1e-12, &repairs);
  CHECK(repairs == 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fixed);
  CHECK(es.eigenvalues().minCoeff() >= 1e-12 - 1e-18);
}

#pragma once

#include "rmopt/manifold.hpp"

#include <Eigen/Dense>

namespace rmopt {

/// Geodesic endpoint on the unit sphere: cos(|v|) x + sin(|v|) v/|v|.
/// Requires |x| = 1 and <x, v> = 0; v = 0 returns x.
template <class D1, class D2>
Eigen::VectorXd sphere_exp(const Eigen::MatrixBase<D1>& x, const Eigen::MatrixBase<D2>& v) {
  const double t = v.norm();
  if (t == 0.0) return x;
  Eigen::VectorXd y = std::cos(t) * x + (std::sin(t) / t) * v;
  y.normalize();
  return y;
}

/// Geodesic distance arccos(<x, y>) with the inner product clamped to [-1, 1].
template <class D1, class D2>
double sphere_distance(const Eigen::MatrixBase<D1>& x, const Eigen::MatrixBase<D2>& y) {
  const double c = std::clamp(x.dot(y), -1.0, 1.0);
  return std::acos(c);
}

/// Inverse of sphere_exp inside the normal neighbourhood. Throws
/// std::domain_error for (numerically) antipodal pairs.
Eigen::VectorXd sphere_log(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Parallel transport of w along the geodesic from x to y.
Eigen::VectorXd sphere_transport(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                 const Eigen::VectorXd& w);

/// Unit sphere S^n embedded in R^{n+1}; injectivity radius pi everywhere.
class SphereManifold final : public Manifold {
 public:
  explicit SphereManifold(Eigen::Index n);

  ManifoldId id() const override { return ManifoldId::Sphere; }
  std::string name() const override;
  Eigen::Index dim() const override { return n_; }
  Eigen::Index point_size() const override { return n_ + 1; }
  Eigen::Index tangent_size() const override { return n_ + 1; }

  double injectivity_radius(const ManifoldPoint&) const override { return kPi; }

  bool is_member(const ManifoldPoint& x, double tol = 1e-9) const override;
  bool is_tangent(const TangentVector& v, double tol = 1e-9) const override;

  Eigen::VectorXd project_tangent(const ManifoldPoint& x,
                                  const Eigen::VectorXd& w) const override;

  ManifoldPoint exp(const ManifoldPoint& x, const TangentVector& v) const override;
  TangentVector log(const ManifoldPoint& x, const ManifoldPoint& y) const override;
  double distance(const ManifoldPoint& x, const ManifoldPoint& y) const override;
  TangentVector parallel_transport(const ManifoldPoint& x, const ManifoldPoint& y,
                                   const TangentVector& w) const override;

  /// Point from (cos t cos p, cos t sin p, sin t); S^2 only.
  ManifoldPoint from_latitude_longitude(double theta, double phi) const;

 private:
  Eigen::Index n_;
};

}  // namespace rmopt

#pragma once

#include "rmopt/manifold.hpp"

#include <Eigen/Dense>

namespace rmopt {

/// Geodesic endpoint on Gr(p,n) for a representative X (orthonormal columns)
/// and horizontal tangent V (X^T V = 0), via the thin SVD V = U S W^T:
/// Y = X W cos(S) W^T + U sin(S) W^T, re-orthonormalized.
Eigen::MatrixXd grassmann_exp(const Eigen::MatrixXd& x, const Eigen::MatrixXd& v);

/// Inverse of grassmann_exp while every principal angle is below pi/2:
/// SVD of (Y - X X^T Y)(X^T Y)^{-1} = U S W^T gives log = U atan(S) W^T.
/// Throws std::domain_error when a principal angle reaches pi/2.
Eigen::MatrixXd grassmann_log(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

/// Square root of the sum of squared principal angles, computed from the
/// singular values of X^T Y clamped to [0, 1].
double grassmann_distance(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

/// Parallel transport of the horizontal tangent H along the geodesic from X
/// toward Y.
Eigen::MatrixXd grassmann_transport(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                                    const Eigen::MatrixXd& h);

/// Real Grassmannian Gr(p,n) of p-planes in R^n; points are n x p matrices
/// with orthonormal columns (representatives of their span), tangents are
/// horizontal matrices. Injectivity radius pi/2 everywhere.
class GrassmannManifold final : public Manifold {
 public:
  GrassmannManifold(Eigen::Index p, Eigen::Index n);

  ManifoldId id() const override { return ManifoldId::Grassmann; }
  std::string name() const override;
  Eigen::Index dim() const override { return p_ * (n_ - p_); }
  Eigen::Index point_size() const override { return n_ * p_; }
  Eigen::Index tangent_size() const override { return n_ * p_; }

  Eigen::Index p() const { return p_; }
  Eigen::Index n() const { return n_; }

  double injectivity_radius(const ManifoldPoint&) const override { return kPi / 2.0; }

  bool is_member(const ManifoldPoint& x, double tol = 1e-9) const override;
  bool is_tangent(const TangentVector& v, double tol = 1e-9) const override;

  Eigen::VectorXd project_tangent(const ManifoldPoint& x,
                                  const Eigen::VectorXd& w) const override;

  ManifoldPoint exp(const ManifoldPoint& x, const TangentVector& v) const override;
  TangentVector log(const ManifoldPoint& x, const ManifoldPoint& y) const override;
  double distance(const ManifoldPoint& x, const ManifoldPoint& y) const override;
  TangentVector parallel_transport(const ManifoldPoint& x, const ManifoldPoint& y,
                                   const TangentVector& w) const override;

  Eigen::MatrixXd unflatten(const Eigen::VectorXd& coords) const;
  Eigen::VectorXd flatten(const Eigen::MatrixXd& m) const;
  ManifoldPoint point(const Eigen::MatrixXd& m) const;

  /// Representative of span(e_1, ..., e_p).
  ManifoldPoint identity_point() const;

 private:
  Eigen::Index p_, n_;
};

}  // namespace rmopt

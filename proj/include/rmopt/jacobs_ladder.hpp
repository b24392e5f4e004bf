#pragma once

#include "rmopt/manifold.hpp"

#include <Eigen/Dense>

#include <cstdint>

namespace rmopt {

/// Chart coordinates on Jacob's ladder: integer torus index plus minor and
/// major angles in [0, 2pi).
struct LadderPoint {
  long long torus = 0;
  double theta = 0.0;
  double phi = 0.0;
};

/// Wraps an angle into [0, 2pi).
double wrap_angle(double a);
/// Wraps an angle difference into [-pi, pi).
double wrap_signed(double a);

/// Jacob's ladder modeled as a chain of flat tori glued by identity
/// transition maps: within a torus the metric is the product
/// ds^2 = r^2 dtheta^2 + R^2 dphi^2, and completing a full major revolution
/// transfers to the adjacent torus instead of wrapping. Equivalently, the
/// major direction develops on a line with torus index floor(Phi / 2pi).
///
/// Tangent representations are the orthonormal components (v_minor, v_major),
/// so a geodesic of velocity v advances the angles by v_minor/r and
/// v_major/R. Injectivity radius pi*r everywhere (half the minor circle).
class JacobsLadderManifold final : public Manifold {
 public:
  explicit JacobsLadderManifold(double major_radius = 2.0, double minor_radius = 0.5);

  ManifoldId id() const override { return ManifoldId::JacobsLadder; }
  std::string name() const override { return "jacobs-ladder"; }
  Eigen::Index dim() const override { return 2; }
  Eigen::Index point_size() const override { return 3; }
  Eigen::Index tangent_size() const override { return 2; }

  double major_radius() const { return major_radius_; }
  double minor_radius() const { return minor_radius_; }

  double injectivity_radius(const ManifoldPoint&) const override {
    return kPi * minor_radius_;
  }

  bool is_member(const ManifoldPoint& x, double tol = 1e-9) const override;
  bool is_tangent(const TangentVector& v, double tol = 1e-9) const override;

  Eigen::VectorXd project_tangent(const ManifoldPoint&,
                                  const Eigen::VectorXd& w) const override {
    return w;  // the chart frame is global and orthonormal
  }

  ManifoldPoint exp(const ManifoldPoint& x, const TangentVector& v) const override;
  TangentVector log(const ManifoldPoint& x, const ManifoldPoint& y) const override;
  double distance(const ManifoldPoint& x, const ManifoldPoint& y) const override;
  TangentVector parallel_transport(const ManifoldPoint& x, const ManifoldPoint& y,
                                   const TangentVector& w) const override;

  /// Heuristic logarithm for swarm-style communication between remote points:
  /// same torus -> product-torus log (both angles wrapped); adjacent torus
  /// (|dn| = 1) -> unit vector along the major direction toward the target;
  /// further apart -> zero vector.
  TangentVector heuristic_log(const ManifoldPoint& x,
                              const ManifoldPoint& y) const override;

  LadderPoint decode(const ManifoldPoint& x) const;
  ManifoldPoint encode(const LadderPoint& p) const;
  ManifoldPoint point(long long torus, double theta, double phi) const;

  /// Torus index of a point (identity on the stored field).
  long long torus_index(const ManifoldPoint& x) const { return decode(x).torus; }

  /// Developed major coordinate 2pi * n + phi.
  double developed_major(const ManifoldPoint& x) const;

 private:
  double major_radius_, minor_radius_;
};

}  // namespace rmopt

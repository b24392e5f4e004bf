#pragma once

#include "rmopt/rng.hpp"
#include "rmopt/types.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>

namespace rmopt {

/// Abstract Riemannian manifold. Implementations provide exact exponential
/// and logarithm maps, Riemannian distance, parallel transport along the
/// connecting geodesic inside a normal neighbourhood, and the injectivity
/// radius. All operations are pure; values are safe to share across workers.
class Manifold {
 public:
  virtual ~Manifold() = default;

  virtual ManifoldId id() const = 0;
  virtual std::string name() const = 0;

  /// Intrinsic dimension.
  virtual Eigen::Index dim() const = 0;
  /// Length of the chart coordinate tuple of a point.
  virtual Eigen::Index point_size() const = 0;
  /// Length of a tangent representation.
  virtual Eigen::Index tangent_size() const = 0;

  virtual double injectivity_radius(const ManifoldPoint& x) const = 0;

  virtual bool is_member(const ManifoldPoint& x, double tol = 1e-9) const = 0;
  virtual bool is_tangent(const TangentVector& v, double tol = 1e-9) const = 0;

  /// Orthogonal projection of an arbitrary representation vector onto the
  /// tangent space at x.
  virtual Eigen::VectorXd project_tangent(const ManifoldPoint& x,
                                          const Eigen::VectorXd& w) const = 0;

  /// Endpoint of the geodesic from x with initial velocity v, run for unit
  /// time. exp(x, 0) == x.
  virtual ManifoldPoint exp(const ManifoldPoint& x, const TangentVector& v) const = 0;

  /// Inverse of exp inside the normal neighbourhood of x. Throws
  /// std::domain_error when y lies at or beyond the cut locus.
  virtual TangentVector log(const ManifoldPoint& x, const ManifoldPoint& y) const = 0;

  virtual double distance(const ManifoldPoint& x, const ManifoldPoint& y) const = 0;

  /// Parallel transport of w (anchored at x) along the geodesic from x to y.
  /// Requires y inside the normal neighbourhood of x.
  virtual TangentVector parallel_transport(const ManifoldPoint& x,
                                           const ManifoldPoint& y,
                                           const TangentVector& w) const = 0;

  /// Logarithm variant safe for swarm-style use. Defaults to the true log;
  /// manifolds without a globally defined log override this with a
  /// documented heuristic.
  virtual TangentVector heuristic_log(const ManifoldPoint& x,
                                      const ManifoldPoint& y) const {
    return log(x, y);
  }

 protected:
  void check_point(const ManifoldPoint& x) const;
  void check_pair(const ManifoldPoint& x, const ManifoldPoint& y) const;
  void check_tangent_at(const ManifoldPoint& x, const TangentVector& v) const;
};

/// Random orthonormal frame at x (Gram-Schmidt over projected Gaussian
/// directions). Deterministic for a fixed rng state.
OrthonormalFrame orthonormal_frame(const Manifold& M, const ManifoldPoint& x, Rng& rng);

/// Transports every basis vector of F along the geodesic to y and
/// re-orthonormalizes to control drift.
OrthonormalFrame transport_frame(const Manifold& M, const OrthonormalFrame& F,
                                 const ManifoldPoint& y);

/// Modified Gram-Schmidt on the columns of m; preserves column order and
/// orientation. Throws on rank deficiency.
Eigen::MatrixXd orthonormalize_columns(Eigen::MatrixXd m);

/// Symmetric positive-definite square root via eigendecomposition.
Eigen::MatrixXd symmetric_sqrt(const Eigen::MatrixXd& c);

/// Symmetrizes and floors the eigenvalues of c at `floor_value`; counts how
/// many eigenvalues were repaired into *repairs when provided.
Eigen::MatrixXd floor_spd(const Eigen::MatrixXd& c, double floor_value,
                          long long* repairs = nullptr);

struct TruncatedSampleStats {
  long long rejected = 0;
  long long fallbacks = 0;
};

/// Frame coordinates of a draw from N(0, sigma^2 * covariance) conditioned on
/// the ball of radius `radius` (rejection sampling, cap 100 * dim attempts;
/// on exhaustion the last draw is rescaled to norm radius * u^(1/dim) and the
/// fallback counter incremented).
Eigen::VectorXd sample_truncated_gaussian_coords(const Eigen::MatrixXd& cov_sqrt,
                                                 double sigma, double radius,
                                                 Rng& rng,
                                                 TruncatedSampleStats* stats = nullptr);

/// Tangent-vector draw from the truncated Gaussian at x expressed through the
/// given frame. Requires radius <= injectivity_radius(x) and SPD covariance.
TangentVector sample_truncated_gaussian(const Manifold& M, const ManifoldPoint& x,
                                        const OrthonormalFrame& frame,
                                        const Eigen::MatrixXd& covariance,
                                        double sigma, double radius, Rng& rng,
                                        TruncatedSampleStats* stats = nullptr);

/// Uniform draw from the geodesic sphere of radius r centered at x
/// (0 < r <= injectivity_radius(x)).
ManifoldPoint sample_geodesic_sphere(const Manifold& M, const ManifoldPoint& x,
                                     double r, Rng& rng);

/// Same, reusing a prebuilt frame at x.
ManifoldPoint sample_geodesic_sphere(const Manifold& M, const OrthonormalFrame& frame,
                                     double r, Rng& rng);

}  // namespace rmopt

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>

namespace rmopt {

enum class ManifoldId : std::uint8_t { Sphere, Grassmann, JacobsLadder };

enum class OptimSense : std::uint8_t { Minimize, Maximize };

std::string to_string(ManifoldId id);

/// A point on a manifold in that manifold's canonical chart.
///
/// Sphere S^n: unit vector in R^{n+1}.
/// Grassmann Gr(p,n): n x p matrix with orthonormal columns, flattened
/// column-major (a representative of the subspace).
/// Jacob's ladder: (torus index, minor angle theta, major angle phi).
struct ManifoldPoint {
  ManifoldId manifold = ManifoldId::Sphere;
  Eigen::VectorXd coords;
};

/// A tangent vector anchored at `base`. The representation follows the chart:
/// sphere: ambient vector orthogonal to the base point; Grassmann: horizontal
/// n x p matrix (X^T V = 0) flattened; ladder: components in the orthonormal
/// (minor, major) frame. In every case the Riemannian inner product equals
/// the Euclidean dot product of representations.
struct TangentVector {
  ManifoldPoint base;
  Eigen::VectorXd rep;

  double norm() const { return rep.norm(); }
};

/// Orthonormal basis of the tangent space at `base`. Columns of `basis` are
/// tangent representations with pairwise Riemannian inner products equal to
/// the Kronecker delta.
struct OrthonormalFrame {
  ManifoldPoint base;
  Eigen::MatrixXd basis;  // tangent_size x dim

  Eigen::Index dim() const { return basis.cols(); }

  /// Coordinates of a tangent vector at the same base point in this frame.
  Eigen::VectorXd coords(const TangentVector& v) const {
    return basis.transpose() * v.rep;
  }

  /// Tangent vector whose frame coordinates are `z`.
  TangentVector vector(const Eigen::VectorXd& z) const {
    return TangentVector{base, basis * z};
  }
};

}  // namespace rmopt

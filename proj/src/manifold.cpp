#include "rmopt/manifold.hpp"

#include <cmath>
#include <stdexcept>

namespace rmopt {

std::string to_string(ManifoldId id) {
  switch (id) {
    case ManifoldId::Sphere: return "sphere";
    case ManifoldId::Grassmann: return "grassmann";
    case ManifoldId::JacobsLadder: return "jacobs-ladder";
  }
  return "unknown";
}

void Manifold::check_point(const ManifoldPoint& x) const {
  if (x.manifold != id())
    throw std::invalid_argument(name() + ": point belongs to " + to_string(x.manifold));
  if (x.coords.size() != point_size())
    throw std::invalid_argument(name() + ": point has wrong coordinate size");
}

void Manifold::check_pair(const ManifoldPoint& x, const ManifoldPoint& y) const {
  check_point(x);
  check_point(y);
}

void Manifold::check_tangent_at(const ManifoldPoint& x, const TangentVector& v) const {
  check_point(x);
  if (v.rep.size() != tangent_size())
    throw std::invalid_argument(name() + ": tangent has wrong representation size");
  if (v.base.manifold != id() || v.base.coords.size() != x.coords.size() ||
      !v.base.coords.isApprox(x.coords, 1e-12))
    throw std::invalid_argument(name() + ": tangent vector anchored at a different point");
}

Eigen::MatrixXd orthonormalize_columns(Eigen::MatrixXd m) {
  const Eigen::Index k = m.cols();
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) m.col(j) -= m.col(i).dot(m.col(j)) * m.col(i);
    const double n = m.col(j).norm();
    if (n < 1e-12) throw std::runtime_error("orthonormalize_columns: rank deficient");
    m.col(j) /= n;
  }
  return m;
}

OrthonormalFrame orthonormal_frame(const Manifold& M, const ManifoldPoint& x, Rng& rng) {
  const Eigen::Index d = M.dim();
  const Eigen::Index ts = M.tangent_size();
  Eigen::MatrixXd basis(ts, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    // Redraw on (improbable) near-dependence with the columns built so far.
    for (int attempt = 0; attempt < 64; ++attempt) {
      Eigen::VectorXd col = M.project_tangent(x, rng.normal_vector(ts));
      for (Eigen::Index i = 0; i < j; ++i) col -= basis.col(i).dot(col) * basis.col(i);
      const double n = col.norm();
      if (n > 1e-8) {
        basis.col(j) = col / n;
        break;
      }
      if (attempt == 63)
        throw std::runtime_error("orthonormal_frame: could not span tangent space");
    }
  }
  return OrthonormalFrame{x, basis};
}

OrthonormalFrame transport_frame(const Manifold& M, const OrthonormalFrame& F,
                                 const ManifoldPoint& y) {
  Eigen::MatrixXd basis(F.basis.rows(), F.basis.cols());
  for (Eigen::Index j = 0; j < F.basis.cols(); ++j) {
    TangentVector w{F.base, F.basis.col(j)};
    basis.col(j) = M.parallel_transport(F.base, y, w).rep;
  }
  return OrthonormalFrame{y, orthonormalize_columns(std::move(basis))};
}

Eigen::MatrixXd symmetric_sqrt(const Eigen::MatrixXd& c) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (c + c.transpose()));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("symmetric_sqrt: eigendecomposition failed");
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

Eigen::MatrixXd floor_spd(const Eigen::MatrixXd& c, double floor_value, long long* repairs) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (c + c.transpose()));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("floor_spd: eigendecomposition failed");
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < floor_value) {
      ev[i] = floor_value;
      if (repairs) ++*repairs;
    }
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

Eigen::VectorXd sample_truncated_gaussian_coords(const Eigen::MatrixXd& cov_sqrt,
                                                 double sigma, double radius, Rng& rng,
                                                 TruncatedSampleStats* stats) {
  if (sigma <= 0.0) throw std::invalid_argument("sample_truncated_gaussian: sigma <= 0");
  if (radius <= 0.0) throw std::invalid_argument("sample_truncated_gaussian: radius <= 0");
  const Eigen::Index d = cov_sqrt.cols();
  const long long cap = 100 * static_cast<long long>(d);
  Eigen::VectorXd z(d);
  for (long long attempt = 0; attempt < cap; ++attempt) {
    z = sigma * (cov_sqrt * rng.normal_vector(d));
    if (z.norm() <= radius) return z;
    if (stats) ++stats->rejected;
  }
  // Rejection budget exhausted: rescale the last rejected draw into the ball.
  if (stats) ++stats->fallbacks;
  const double u = rng.uniform();
  const double target = radius * std::pow(u, 1.0 / static_cast<double>(d));
  return z * (target / z.norm());
}

TangentVector sample_truncated_gaussian(const Manifold& M, const ManifoldPoint& x,
                                        const OrthonormalFrame& frame,
                                        const Eigen::MatrixXd& covariance, double sigma,
                                        double radius, Rng& rng,
                                        TruncatedSampleStats* stats) {
  if (radius > M.injectivity_radius(x) + 1e-12)
    throw std::invalid_argument("sample_truncated_gaussian: radius exceeds injectivity radius");
  const Eigen::MatrixXd a = symmetric_sqrt(covariance);
  return frame.vector(sample_truncated_gaussian_coords(a, sigma, radius, rng, stats));
}

ManifoldPoint sample_geodesic_sphere(const Manifold& M, const OrthonormalFrame& frame,
                                     double r, Rng& rng) {
  if (r <= 0.0 || r > M.injectivity_radius(frame.base) + 1e-12)
    throw std::invalid_argument("sample_geodesic_sphere: radius outside (0, inj]");
  Eigen::VectorXd u(M.dim());
  double n = 0.0;
  do {
    u = rng.normal_vector(M.dim());
    n = u.norm();
  } while (n < 1e-12);
  return M.exp(frame.base, frame.vector((r / n) * u));
}

ManifoldPoint sample_geodesic_sphere(const Manifold& M, const ManifoldPoint& x, double r,
                                     Rng& rng) {
  const OrthonormalFrame frame = orthonormal_frame(M, x, rng);
  return sample_geodesic_sphere(M, frame, r, rng);
}

}  // namespace rmopt

#include "rmopt/grassmann.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

namespace rmopt {

Eigen::MatrixXd grassmann_exp(const Eigen::MatrixXd& x, const Eigen::MatrixXd& v) {
  if (v.norm() == 0.0) return x;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(v, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd s = svd.singularValues();
  const Eigen::MatrixXd& u = svd.matrixU();
  const Eigen::MatrixXd& w = svd.matrixV();
  Eigen::MatrixXd y = x * (w * s.array().cos().matrix().asDiagonal() * w.transpose()) +
                      u * s.array().sin().matrix().asDiagonal() * w.transpose();
  return orthonormalize_columns(std::move(y));
}

double grassmann_distance(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  // Cosines of the principal angles, descending (theta ascending).
  Eigen::JacobiSVD<Eigen::MatrixXd> svd_cos(x.transpose() * y);
  const Eigen::VectorXd s_cos = svd_cos.singularValues().cwiseMin(1.0).cwiseMax(0.0);
  // Sines of the principal angles from the complement part, for accuracy at
  // small angles where acos is ill-conditioned.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd_sin(y - x * (x.transpose() * y));
  Eigen::VectorXd s_sin = svd_sin.singularValues().cwiseMin(1.0).cwiseMax(0.0);
  s_sin.reverseInPlace();  // ascending, aligned with theta ascending
  double acc = 0.0;
  for (Eigen::Index i = 0; i < s_cos.size(); ++i) {
    const double theta =
        (s_cos[i] * s_cos[i] > 0.5) ? std::asin(s_sin[i]) : std::acos(s_cos[i]);
    acc += theta * theta;
  }
  return std::sqrt(acc);
}

Eigen::MatrixXd grassmann_log(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  const Eigen::MatrixXd m = x.transpose() * y;  // p x p
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  if (!lu.isInvertible())
    throw std::domain_error("grassmann_log: a principal angle reached pi/2");
  const Eigen::MatrixXd t = (y - x * m) * lu.inverse();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(t, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd s = svd.singularValues();
  return svd.matrixU() * s.array().atan().matrix().asDiagonal() * svd.matrixV().transpose();
}

Eigen::MatrixXd grassmann_transport(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                                    const Eigen::MatrixXd& h) {
  const Eigen::MatrixXd delta = grassmann_log(x, y);
  if (delta.norm() < 1e-15) return h;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(delta, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd s = svd.singularValues();
  const Eigen::MatrixXd& u = svd.matrixU();
  const Eigen::MatrixXd& w = svd.matrixV();
  const Eigen::MatrixXd uth = u.transpose() * h;
  return (x * w) * (-s.array().sin()).matrix().asDiagonal() * uth +
         u * s.array().cos().matrix().asDiagonal() * uth + h - u * uth;
}

GrassmannManifold::GrassmannManifold(Eigen::Index p, Eigen::Index n) : p_(p), n_(n) {
  if (p < 1 || p >= n)
    throw std::invalid_argument("GrassmannManifold: need 1 <= p < n");
}

std::string GrassmannManifold::name() const {
  return "Gr(" + std::to_string(p_) + "," + std::to_string(n_) + ")";
}

Eigen::MatrixXd GrassmannManifold::unflatten(const Eigen::VectorXd& coords) const {
  return Eigen::Map<const Eigen::MatrixXd>(coords.data(), n_, p_);
}

Eigen::VectorXd GrassmannManifold::flatten(const Eigen::MatrixXd& m) const {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), n_ * p_);
}

ManifoldPoint GrassmannManifold::point(const Eigen::MatrixXd& m) const {
  return ManifoldPoint{id(), flatten(m)};
}

ManifoldPoint GrassmannManifold::identity_point() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, p_);
  m.topLeftCorner(p_, p_).setIdentity();
  return point(m);
}

bool GrassmannManifold::is_member(const ManifoldPoint& x, double tol) const {
  if (x.manifold != id() || x.coords.size() != point_size()) return false;
  const Eigen::MatrixXd m = unflatten(x.coords);
  return (m.transpose() * m - Eigen::MatrixXd::Identity(p_, p_)).norm() <= tol * p_;
}

bool GrassmannManifold::is_tangent(const TangentVector& v, double tol) const {
  if (v.rep.size() != tangent_size() || !is_member(v.base, tol)) return false;
  const Eigen::MatrixXd x = unflatten(v.base.coords);
  const Eigen::MatrixXd h = unflatten(v.rep);
  return (x.transpose() * h).norm() <= tol * std::max(1.0, h.norm());
}

Eigen::VectorXd GrassmannManifold::project_tangent(const ManifoldPoint& x,
                                                   const Eigen::VectorXd& w) const {
  check_point(x);
  const Eigen::MatrixXd xm = unflatten(x.coords);
  const Eigen::MatrixXd wm = Eigen::Map<const Eigen::MatrixXd>(w.data(), n_, p_);
  return flatten(wm - xm * (xm.transpose() * wm));
}

ManifoldPoint GrassmannManifold::exp(const ManifoldPoint& x, const TangentVector& v) const {
  check_tangent_at(x, v);
  return point(grassmann_exp(unflatten(x.coords), unflatten(v.rep)));
}

TangentVector GrassmannManifold::log(const ManifoldPoint& x, const ManifoldPoint& y) const {
  check_pair(x, y);
  return TangentVector{x, flatten(grassmann_log(unflatten(x.coords), unflatten(y.coords)))};
}

double GrassmannManifold::distance(const ManifoldPoint& x, const ManifoldPoint& y) const {
  check_pair(x, y);
  return grassmann_distance(unflatten(x.coords), unflatten(y.coords));
}

TangentVector GrassmannManifold::parallel_transport(const ManifoldPoint& x,
                                                    const ManifoldPoint& y,
                                                    const TangentVector& w) const {
  check_tangent_at(x, w);
  check_point(y);
  return TangentVector{
      y, flatten(grassmann_transport(unflatten(x.coords), unflatten(y.coords),
                                     unflatten(w.rep)))};
}

}  // namespace rmopt

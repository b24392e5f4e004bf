#include "rmopt/sphere.hpp"

#include <cmath>
#include <stdexcept>

namespace rmopt {

Eigen::VectorXd sphere_log(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const double c = std::clamp(x.dot(y), -1.0, 1.0);
  const Eigen::VectorXd perp = y - c * x;
  const double pn = perp.norm();
  if (pn < 1e-12) {
    if (c > 0.0) return Eigen::VectorXd::Zero(x.size());
    throw std::domain_error("sphere_log: point at or beyond the cut locus (antipode)");
  }
  return (std::acos(c) / pn) * perp;
}

Eigen::VectorXd sphere_transport(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                 const Eigen::VectorXd& w) {
  const double c = std::clamp(x.dot(y), -1.0, 1.0);
  const Eigen::VectorXd perp = y - c * x;
  const double pn = perp.norm();
  if (pn < 1e-12) {
    if (c > 0.0) return w;
    throw std::domain_error("sphere_transport: target outside normal neighbourhood");
  }
  const double d = std::acos(c);
  const Eigen::VectorXd u = perp / pn;  // unit initial direction of the geodesic
  const double wu = u.dot(w);
  return w + (std::cos(d) - 1.0) * wu * u - std::sin(d) * wu * x;
}

SphereManifold::SphereManifold(Eigen::Index n) : n_(n) {
  if (n < 1) throw std::invalid_argument("SphereManifold: n must be >= 1");
}

std::string SphereManifold::name() const { return "S^" + std::to_string(n_); }

bool SphereManifold::is_member(const ManifoldPoint& x, double tol) const {
  if (x.manifold != id() || x.coords.size() != point_size()) return false;
  return std::abs(x.coords.norm() - 1.0) <= tol;
}

bool SphereManifold::is_tangent(const TangentVector& v, double tol) const {
  if (v.rep.size() != tangent_size() || !is_member(v.base, tol)) return false;
  return std::abs(v.base.coords.dot(v.rep)) <= tol * std::max(1.0, v.rep.norm());
}

Eigen::VectorXd SphereManifold::project_tangent(const ManifoldPoint& x,
                                                const Eigen::VectorXd& w) const {
  check_point(x);
  return w - x.coords.dot(w) * x.coords;
}

ManifoldPoint SphereManifold::exp(const ManifoldPoint& x, const TangentVector& v) const {
  check_tangent_at(x, v);
  return ManifoldPoint{id(), sphere_exp(x.coords, v.rep)};
}

TangentVector SphereManifold::log(const ManifoldPoint& x, const ManifoldPoint& y) const {
  check_pair(x, y);
  return TangentVector{x, sphere_log(x.coords, y.coords)};
}

double SphereManifold::distance(const ManifoldPoint& x, const ManifoldPoint& y) const {
  check_pair(x, y);
  return sphere_distance(x.coords, y.coords);
}

TangentVector SphereManifold::parallel_transport(const ManifoldPoint& x,
                                                 const ManifoldPoint& y,
                                                 const TangentVector& w) const {
  check_tangent_at(x, w);
  check_point(y);
  return TangentVector{y, sphere_transport(x.coords, y.coords, w.rep)};
}

ManifoldPoint SphereManifold::from_latitude_longitude(double theta, double phi) const {
  if (n_ != 2)
    throw std::invalid_argument("from_latitude_longitude: defined on S^2 only");
  Eigen::VectorXd p(3);
  p << std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi), std::sin(theta);
  return ManifoldPoint{id(), p};
}

}  // namespace rmopt

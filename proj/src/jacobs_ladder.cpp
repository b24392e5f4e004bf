#include "rmopt/jacobs_ladder.hpp"

#include <cmath>
#include <stdexcept>

namespace rmopt {

double wrap_angle(double a) {
  double w = std::fmod(a, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;  // guard against fmod rounding to 2pi
  return w;
}

double wrap_signed(double a) {
  double w = std::fmod(a + kPi, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  return w - kPi;
}

JacobsLadderManifold::JacobsLadderManifold(double major_radius, double minor_radius)
    : major_radius_(major_radius), minor_radius_(minor_radius) {
  if (!(major_radius > minor_radius && minor_radius > 0.0))
    throw std::invalid_argument("JacobsLadderManifold: need R > r > 0");
}

LadderPoint JacobsLadderManifold::decode(const ManifoldPoint& x) const {
  check_point(x);
  return LadderPoint{static_cast<long long>(std::llround(x.coords[0])), x.coords[1],
                     x.coords[2]};
}

ManifoldPoint JacobsLadderManifold::encode(const LadderPoint& p) const {
  Eigen::VectorXd c(3);
  c << static_cast<double>(p.torus), wrap_angle(p.theta), wrap_angle(p.phi);
  return ManifoldPoint{id(), c};
}

ManifoldPoint JacobsLadderManifold::point(long long torus, double theta, double phi) const {
  return encode(LadderPoint{torus, theta, phi});
}

double JacobsLadderManifold::developed_major(const ManifoldPoint& x) const {
  const LadderPoint p = decode(x);
  return kTwoPi * static_cast<double>(p.torus) + p.phi;
}

bool JacobsLadderManifold::is_member(const ManifoldPoint& x, double tol) const {
  if (x.manifold != id() || x.coords.size() != 3) return false;
  const double n = x.coords[0];
  if (std::abs(n - std::llround(n)) > tol) return false;
  const double theta = x.coords[1];
  const double phi = x.coords[2];
  return theta >= -tol && theta < kTwoPi + tol && phi >= -tol && phi < kTwoPi + tol;
}

bool JacobsLadderManifold::is_tangent(const TangentVector& v, double tol) const {
  return v.rep.size() == 2 && is_member(v.base, tol);
}

ManifoldPoint JacobsLadderManifold::exp(const ManifoldPoint& x,
                                        const TangentVector& v) const {
  check_tangent_at(x, v);
  const LadderPoint p = decode(x);
  const double theta = wrap_angle(p.theta + v.rep[0] / minor_radius_);
  // Major motion develops along the chain: each full revolution shifts the
  // torus index rather than wrapping.
  const double developed = developed_major(x) + v.rep[1] / major_radius_;
  const double torus = std::floor(developed / kTwoPi);
  const double phi = developed - kTwoPi * torus;
  return point(static_cast<long long>(torus), theta, phi);
}

double JacobsLadderManifold::distance(const ManifoldPoint& x,
                                      const ManifoldPoint& y) const {
  check_pair(x, y);
  const LadderPoint a = decode(x);
  const LadderPoint b = decode(y);
  const double minor = minor_radius_ * wrap_signed(b.theta - a.theta);
  const double major = major_radius_ * (developed_major(y) - developed_major(x));
  return std::hypot(minor, major);
}

TangentVector JacobsLadderManifold::log(const ManifoldPoint& x,
                                        const ManifoldPoint& y) const {
  check_pair(x, y);
  const LadderPoint a = decode(x);
  const LadderPoint b = decode(y);
  Eigen::Vector2d v(minor_radius_ * wrap_signed(b.theta - a.theta),
                    major_radius_ * (developed_major(y) - developed_major(x)));
  if (v.norm() >= injectivity_radius(x))
    throw std::domain_error("jacobs-ladder log: target outside the injectivity ball");
  return TangentVector{x, v};
}

TangentVector JacobsLadderManifold::parallel_transport(const ManifoldPoint& x,
                                                       const ManifoldPoint& y,
                                                       const TangentVector& w) const {
  check_tangent_at(x, w);
  check_point(y);
  // Flat chain-of-cylinders chart with identity transitions: components are
  // preserved verbatim.
  return TangentVector{y, w.rep};
}

TangentVector JacobsLadderManifold::heuristic_log(const ManifoldPoint& x,
                                                  const ManifoldPoint& y) const {
  check_pair(x, y);
  const LadderPoint a = decode(x);
  const LadderPoint b = decode(y);
  const long long dn = b.torus - a.torus;
  if (dn == 0) {
    // Product-torus development confined to the shared torus: both angles wrap.
    Eigen::Vector2d v(minor_radius_ * wrap_signed(b.theta - a.theta),
                      major_radius_ * wrap_signed(b.phi - a.phi));
    return TangentVector{x, v};
  }
  if (dn == 1 || dn == -1) {
    return TangentVector{x, Eigen::Vector2d(0.0, dn > 0 ? 1.0 : -1.0)};
  }
  return TangentVector{x, Eigen::Vector2d::Zero()};
}

}  // namespace rmopt

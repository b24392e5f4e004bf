#include "rmopt/objectives.hpp"

#include <cmath>
#include <stdexcept>

namespace rmopt {

double sphere_objective(double theta, double phi) {
  return -2.0 * std::cos(6.0 * theta) + 2.0 * std::cos(12.0 * phi) +
         (kPi / 12.0 - phi) * (kPi / 12.0 - phi) + 3.5 * theta * theta + 4.0;
}

double sphere_objective_value(const ManifoldPoint& p) {
  const double z = std::clamp(p.coords[2], -1.0, 1.0);
  const double theta = std::asin(z);
  double phi = std::atan2(p.coords[1], p.coords[0]);
  if (phi < 0.0) phi += kTwoPi;
  return sphere_objective(theta, phi);
}

double gramacy_lee_profile(double d) {
  const double quartic = std::pow(d - 1.0, 4);
  if (d < 1e-12) return 5.0 * kPi + quartic;
  return std::sin(10.0 * kPi * d) / (2.0 * d) + quartic;
}

ProfileMinimum gramacy_lee_minimum() {
  // Coarse scan over (0, pi/2], then golden-section refinement.
  const int steps = 20000;
  double best_d = 1e-6;
  double best_v = gramacy_lee_profile(best_d);
  for (int i = 1; i <= steps; ++i) {
    const double d = (kPi / 2.0) * static_cast<double>(i) / steps;
    const double v = gramacy_lee_profile(d);
    if (v < best_v) {
      best_v = v;
      best_d = d;
    }
  }
  double lo = std::max(1e-9, best_d - kPi / (2.0 * steps));
  double hi = std::min(kPi / 2.0, best_d + kPi / (2.0 * steps));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - inv_phi * (hi - lo);
  double b = lo + inv_phi * (hi - lo);
  double fa = gramacy_lee_profile(a);
  double fb = gramacy_lee_profile(b);
  while (hi - lo > 1e-13) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - inv_phi * (hi - lo);
      fa = gramacy_lee_profile(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + inv_phi * (hi - lo);
      fb = gramacy_lee_profile(b);
    }
  }
  const double d = 0.5 * (lo + hi);
  return ProfileMinimum{d, gramacy_lee_profile(d)};
}

double grassmann_objective_value(const GrassmannManifold& gr, const ManifoldPoint& x) {
  const Eigen::MatrixXd xm = gr.unflatten(x.coords);
  const Eigen::MatrixXd id = gr.unflatten(gr.identity_point().coords);
  return gramacy_lee_profile(grassmann_distance(xm, id));
}

namespace {

double sinc(double t) { return t == 0.0 ? 1.0 : std::sin(t) / t; }

double fg_branch(long long n, long long center) {
  const double s = sinc(0.8 * static_cast<double>(n - center));
  const double envelope = std::pow(std::abs(static_cast<double>(n) / 20.0), 0.1);
  return (1.05 - s * s) * envelope;
}

}  // namespace

double jacobs_fG(long long n) {
  if (n == 0 || n == 15 || n == -25) return 0.05;
  if (n > 7) return fg_branch(n, 15);    // n > 15/2
  if (n < -7) return fg_branch(n, -25);  // n < -15/2
  return fg_branch(n, 0);
}

double jacobs_fL(double theta, double phi) {
  const double s3t = std::sin(3.0 * kPi * theta);
  const double s3p = std::sin(3.0 * kPi * phi);
  const double s2p = std::sin(2.0 * kPi * phi);
  return s3t * s3t + (theta - 1.0) * (theta - 1.0) * (1.0 + s3p * s3p) +
         (phi - 1.0) * (phi - 1.0) * (1.0 + s2p * s2p) + 35.0;
}

double jacobs_objective_value(const JacobsLadderManifold& jl, const ManifoldPoint& p) {
  const LadderPoint lp = jl.decode(p);
  return jacobs_fG(lp.torus) * jacobs_fL(lp.theta, lp.phi);
}

bool ladder_torus_optimal(long long n) { return n == 0 || n == 15 || n == -25; }

bool ladder_angles_optimal(double theta, double phi) {
  return std::abs(wrap_signed(theta - 1.0)) < 0.1 && std::abs(wrap_signed(phi - 1.0)) < 0.1;
}

ManifoldPoint random_initial(const Manifold& M, Rng& rng, const LadderInitBounds& bounds) {
  switch (M.id()) {
    case ManifoldId::Sphere: {
      Eigen::VectorXd v;
      do {
        v = rng.normal_vector(M.point_size());
      } while (v.norm() < 1e-12);
      v.normalize();
      return ManifoldPoint{ManifoldId::Sphere, v};
    }
    case ManifoldId::Grassmann: {
      const auto& gr = dynamic_cast<const GrassmannManifold&>(M);
      Eigen::MatrixXd a(gr.n(), gr.p());
      for (Eigen::Index j = 0; j < gr.p(); ++j) a.col(j) = rng.normal_vector(gr.n());
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
      Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(gr.n(), gr.p());
      const Eigen::MatrixXd r = qr.matrixQR().topLeftCorner(gr.p(), gr.p());
      // Sign fix makes the distribution Haar-uniform over subspaces.
      for (Eigen::Index j = 0; j < gr.p(); ++j)
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
      return gr.point(q);
    }
    case ManifoldId::JacobsLadder: {
      const auto& jl = dynamic_cast<const JacobsLadderManifold&>(M);
      if (bounds.torus_max < bounds.torus_min)
        throw std::invalid_argument("random_initial: empty torus range");
      const std::uint64_t span =
          static_cast<std::uint64_t>(bounds.torus_max - bounds.torus_min) + 1;
      const long long torus = bounds.torus_min + static_cast<long long>(rng.below(span));
      return jl.point(torus, rng.uniform() * kTwoPi, rng.uniform() * kTwoPi);
    }
  }
  throw std::logic_error("random_initial: unknown manifold");
}

Objective make_objective(const std::string& id) {
  Objective obj;
  obj.id = id;
  if (id == "s2") {
    auto sphere = std::make_shared<SphereManifold>(2);
    obj.manifold = sphere;
    obj.fn = [](const ManifoldPoint& p) { return sphere_objective_value(p); };
    obj.optimum_value = 0.0;
    obj.optima = {sphere->from_latitude_longitude(0.0, kPi / 12.0)};
    obj.success = SuccessRule{SuccessRule::Kind::ValueBelow, 0.0, 1e-6};
    return obj;
  }
  if (id == "gr24" || id == "gr25") {
    const Eigen::Index n = id == "gr24" ? 4 : 5;
    auto gr = std::make_shared<GrassmannManifold>(2, n);
    obj.manifold = gr;
    obj.fn = [gr](const ManifoldPoint& p) { return grassmann_objective_value(*gr, p); };
    const ProfileMinimum pm = gramacy_lee_minimum();
    obj.optimum_value = pm.value;
    // A representative minimizer: move distance d* from the identity in a
    // fixed horizontal direction.
    const ManifoldPoint identity = gr->identity_point();
    Eigen::MatrixXd dir = Eigen::MatrixXd::Zero(n, 2);
    dir(2, 0) = 1.0;  // unit horizontal direction, a single principal angle
    const TangentVector v{identity, gr->flatten(pm.d * dir)};
    obj.optima = {gr->exp(identity, v)};
    obj.success = SuccessRule{SuccessRule::Kind::ValueBelow, -2.87, 1e-8};
    return obj;
  }
  if (id == "jl") {
    auto jl = std::make_shared<JacobsLadderManifold>();
    obj.manifold = jl;
    obj.fn = [jl](const ManifoldPoint& p) { return jacobs_objective_value(*jl, p); };
    obj.optimum_value = 1.75;
    obj.optima = {jl->point(0, 1.0, 1.0), jl->point(15, 1.0, 1.0), jl->point(-25, 1.0, 1.0)};
    obj.success = SuccessRule{SuccessRule::Kind::ValueNear, 1.75, 1e-8};
    obj.init_bounds = LadderInitBounds{-30, 30};
    return obj;
  }
  throw std::invalid_argument("make_objective: unknown objective '" + id + "'");
}

}  // namespace rmopt

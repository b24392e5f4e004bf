#include "rmopt/trust_region.hpp"

#include <cmath>
#include <stdexcept>

namespace rmopt {

RtrState make_rtr_state(const ManifoldPoint& x0, const RtrConfig& config) {
  RtrState s;
  s.x = x0;
  s.delta = config.delta0;
  return s;
}

namespace {

// Positive root tau of |eta + tau d| = delta.
double boundary_tau(const Eigen::VectorXd& eta, const Eigen::VectorXd& d, double delta) {
  const double dd = d.squaredNorm();
  const double ed = eta.dot(d);
  const double ee = eta.squaredNorm();
  const double disc = std::max(0.0, ed * ed - dd * (ee - delta * delta));
  return (-ed + std::sqrt(disc)) / dd;
}

}  // namespace

Eigen::VectorXd steihaug_cg(const Eigen::VectorXd& g, const Eigen::MatrixXd& h,
                            double delta) {
  const Eigen::Index n = g.size();
  Eigen::VectorXd eta = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd r = g;
  Eigen::VectorXd d = -r;
  const double r0 = r.norm();
  if (r0 == 0.0) return eta;
  const double tol = r0 * std::min(1e-8, std::sqrt(r0));

  for (Eigen::Index j = 0; j < 4 * n; ++j) {
    const Eigen::VectorXd hd = h * d;
    const double curvature = d.dot(hd);
    if (curvature <= 0.0) return eta + boundary_tau(eta, d, delta) * d;

    const double rr = r.squaredNorm();
    const double alpha = rr / curvature;
    if ((eta + alpha * d).norm() >= delta) return eta + boundary_tau(eta, d, delta) * d;

    eta += alpha * d;
    r += alpha * hd;
    if (r.norm() <= tol) break;
    d = -r + (r.squaredNorm() / rr) * d;
  }
  return eta;
}

RtrState rtr_step(const Manifold& M, const RtrState& state, const ObjectiveFn& f,
                  const RtrConfig& config, Rng& rng) {
  const Eigen::Index n = M.dim();
  const OrthonormalFrame frame = orthonormal_frame(M, state.x, rng);

  const auto chart = [&](const Eigen::VectorXd& u) {
    return f(M.exp(state.x, frame.vector(u)));
  };

  const double fx = f(state.x);

  // Central finite differences: gradient with step hg, Hessian with step hh.
  const double hg = config.fd_gradient_step;
  const double hh = config.fd_hessian_step;
  Eigen::VectorXd g(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[i] = hg;
    g[i] = (chart(e) - chart(-e)) / (2.0 * hg);
  }
  Eigen::MatrixXd h(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[i] = hh;
    h(i, i) = (chart(e) - 2.0 * fx + chart(-e)) / (hh * hh);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      Eigen::VectorXd ei = Eigen::VectorXd::Zero(n), ej = Eigen::VectorXd::Zero(n);
      ei[i] = hh;
      ej[j] = hh;
      const double v = (chart(ei + ej) - chart(ei - ej) - chart(-ei + ej) + chart(-ei - ej)) /
                       (4.0 * hh * hh);
      h(i, j) = v;
      h(j, i) = v;
    }
  }

  RtrState next = state;
  next.iteration = state.iteration + 1;
  next.gradient_norm = g.norm();
  if (next.gradient_norm <= config.gradient_tolerance || state.delta <= config.min_delta) {
    next.converged = true;
    next.last_accepted = false;
    return next;
  }

  const Eigen::VectorXd eta = steihaug_cg(g, h, state.delta);
  const double model_decrease = -(g.dot(eta) + 0.5 * eta.dot(h * eta));
  const bool on_boundary = std::abs(eta.norm() - state.delta) <= 1e-10 * std::max(1.0, state.delta);

  if (model_decrease <= 0.0) {
    next.delta = state.delta / 4.0;
    next.last_accepted = false;
    next.last_rho = 0.0;
    return next;
  }

  const ManifoldPoint candidate = M.exp(state.x, frame.vector(eta));
  const double fc = f(candidate);
  const double rho = (fx - fc) / model_decrease;
  next.last_rho = rho;

  if (rho < 0.25) {
    next.delta = state.delta / 4.0;
  } else if (rho > 0.75 && on_boundary) {
    next.delta = std::min(2.0 * state.delta, config.delta_bar);
  }
  if (rho > config.rho_prime) {
    next.x = candidate;
    next.last_accepted = true;
  } else {
    next.last_accepted = false;
  }
  if (next.delta <= config.min_delta) next.converged = true;
  return next;
}

}  // namespace rmopt

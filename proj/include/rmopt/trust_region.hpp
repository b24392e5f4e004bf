#pragma once

#include "rmopt/manifold.hpp"
#include "rmopt/rsdfo.hpp"

#include <Eigen/Dense>

namespace rmopt {

struct RtrConfig {
  double delta_bar = kPi;        // upper bound on the step length
  double delta0 = kPi / 8.0;     // initial trust radius
  double rho_prime = 0.1;        // acceptance threshold
  double fd_gradient_step = 1e-6;
  double fd_hessian_step = 1e-4;
  double gradient_tolerance = 1e-7;  // declare convergence below this
  double min_delta = 1e-11;
};

struct RtrState {
  ManifoldPoint x;
  double delta = 0.0;
  long long iteration = 0;
  bool converged = false;
  bool last_accepted = false;
  double last_rho = 0.0;
  double gradient_norm = std::numeric_limits<double>::infinity();
};

RtrState make_rtr_state(const ManifoldPoint& x0, const RtrConfig& config);

/// Steihaug truncated conjugate gradients for min g^T eta + 0.5 eta^T H eta
/// subject to |eta| <= delta.
Eigen::VectorXd steihaug_cg(const Eigen::VectorXd& g, const Eigen::MatrixXd& h,
                            double delta);

/// One trust-region iteration. The model gradient and Hessian of f o exp at
/// the origin are estimated with central finite differences in a seeded
/// orthonormal frame; every stencil evaluation goes through f and therefore
/// counts against the caller's budget. The subproblem is solved with
/// Steihaug-CG; the candidate is accepted when the reduction ratio exceeds
/// rho'; the radius shrinks by 4 below ratio 1/4 and doubles (capped at
/// delta_bar) above 3/4 on boundary steps. A non-positive model decrease
/// rejects the step and shrinks the radius.
RtrState rtr_step(const Manifold& M, const RtrState& state, const ObjectiveFn& f,
                  const RtrConfig& config, Rng& rng);

}  // namespace rmopt

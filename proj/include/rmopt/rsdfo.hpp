#pragma once

#include "rmopt/manifold.hpp"

#include <Eigen/Dense>

#include <functional>
#include <limits>

namespace rmopt {

using ObjectiveFn = std::function<double(const ManifoldPoint&)>;

/// Local sampling-distribution state of one search stream: mean point,
/// cached orthonormal frame, covariance and step size in frame coordinates,
/// plus the evolution paths used by the CMA-ES variant.
struct RsdfoState {
  ManifoldPoint mean;
  OrthonormalFrame frame;
  Eigen::MatrixXd covariance;  // dim x dim, frame coordinates, symmetric PD
  double sigma = 1.0;
  Eigen::VectorXd p_sigma;  // isotropic evolution path
  Eigen::VectorXd p_c;      // anisotropic evolution path
  long long iteration = 0;
  double best_value = std::numeric_limits<double>::infinity();
  double last_batch_best = std::numeric_limits<double>::infinity();
  bool terminated = false;

  long long cov_repairs = 0;
  TruncatedSampleStats sample_stats;
};

/// Fresh stream at x: identity covariance, unit step size, zero paths.
RsdfoState make_rsdfo_state(const Manifold& M, const ManifoldPoint& x, Rng& rng);

/// Recombination weights w_i proportional to log((m2+1)/i), normalized.
Eigen::VectorXd cma_log_weights(int m2);

/// E|N(0, I_dim)| by the standard series approximation
/// sqrt(dim) (1 - 1/(4 dim) + 1/(21 dim^2)).
double expected_gaussian_norm(Eigen::Index dim);

/// CMA-ES strategy parameters (recombination weights, path and covariance
/// learning rates, step-size damping) for m1 parents on a dim-dimensional
/// manifold; m2 defaults to m1/4.
struct CmaParams {
  int m1 = 0;
  int m2 = 0;
  Eigen::VectorXd weights;
  double m_eff = 0.0;
  double c_c = 0.0;
  double c_sigma = 0.0;
  double mu_cov = 0.0;
  double c_cov = 0.0;
  double d_sigma = 0.0;

  static CmaParams defaults(int m1, Eigen::Index dim);
};

/// Log-step-size multiplier exp((c_sigma/d_sigma)(|p_sigma|/E|N(0,I)| - 1)).
double cma_sigma_update(double sigma, double p_sigma_norm, Eigen::Index dim,
                        const CmaParams& params);

/// One iteration of the generic core: sample `parents_m1` tangent vectors
/// from the truncated N(0, sigma^2 C) on the ball of radius `sample_radius`
/// (the injectivity ball unless the caller confines it), rank by
/// f(exp(mean, v)) ascending, translate the mean along the weighted mean of
/// the best `select_m2` draws (clipped to 0.95 * step_radius),
/// re-estimate the covariance as their weighted empirical second moment, and
/// parallel transport the state to the new mean. Marks the stream terminated
/// when consecutive batch bests change by less than `improvement_tol`
/// (stagnation at the sampling distribution's collapse).
RsdfoState rsdfo_step(const Manifold& M, const RsdfoState& state, const ObjectiveFn& f,
                      int parents_m1, int select_m2, double sample_radius,
                      double step_radius, Rng& rng, double sigma_v = 1.0,
                      double improvement_tol = 1e-14);

/// One full CMA-ES iteration on the manifold: sampling and ranking as above,
/// then the isotropic/anisotropic path updates, the rank-one plus rank-m2
/// covariance update, and the log step-size update, with covariance and both
/// paths parallel transported to the new mean.
RsdfoState rcmaes_step(const Manifold& M, const RsdfoState& state, const ObjectiveFn& f,
                       const CmaParams& params, double sample_radius, double step_radius,
                       Rng& rng, double improvement_tol = 1e-14);

/// Moves a state to `new_mean`: the frame is parallel transported (and
/// re-orthonormalized); covariance and path coordinates are preserved
/// verbatim, so covariance eigenvalues are exactly invariant.
RsdfoState transport_state(const Manifold& M, const RsdfoState& state,
                           const ManifoldPoint& new_mean);

}  // namespace rmopt

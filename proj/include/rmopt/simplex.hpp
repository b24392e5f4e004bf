#pragma once

#include "rmopt/manifold.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <vector>

namespace rmopt {

/// Mixture coefficients {phi_a}: entries in [0, 1] summing to 1, labelled by
/// centroid ids. Construction renormalizes away float drift and rejects
/// grossly invalid input.
class SimplexPoint {
 public:
  SimplexPoint() = default;
  explicit SimplexPoint(Eigen::VectorXd coefficients);
  SimplexPoint(Eigen::VectorXd coefficients, std::vector<long long> labels);

  Eigen::Index size() const { return coefficients_.size(); }
  const Eigen::VectorXd& coefficients() const { return coefficients_; }
  const std::vector<long long>& labels() const { return labels_; }
  double operator[](Eigen::Index i) const { return coefficients_[i]; }

 private:
  Eigen::VectorXd coefficients_;
  std::vector<long long> labels_;
};

/// Monte-Carlo estimate of the expected fitness of f over a density supported
/// in a geodesic ball.
struct ExpectedFitness {
  double value = 0.0;
  long long mc_samples = 0;
  long long centroid_id = -1;
};

/// (1/n_mc) sum of f(exp_x(v_i)) with v_i drawn from the truncated Gaussian
/// N(0, sigma^2 Sigma) on the ball of radius `radius`. Deterministic for a
/// fixed rng seed; throws when n_mc == 0.
ExpectedFitness expected_fitness(const Manifold& M,
                                 const std::function<double(const ManifoldPoint&)>& f,
                                 const ManifoldPoint& x, const OrthonormalFrame& frame,
                                 const Eigen::MatrixXd& covariance, double sigma,
                                 double radius, long long n_mc, Rng& rng,
                                 TruncatedSampleStats* stats = nullptr);

/// sum_a phi_a * E_a. Sizes (and labels, when both carry them) must align.
double mixture_expected_fitness(const SimplexPoint& simplex, const Eigen::VectorXd& e);

/// Diagonal of the inverse modified simplex metric: entries 1/(phi_a + eps0).
Eigen::VectorXd modified_metric_inverse(const SimplexPoint& simplex, double epsilon0);

/// Modified metric pairing g_xi(Y, Z) = sum_a y_a z_a (phi_a + eps0).
double modified_metric(const SimplexPoint& xi, const Eigen::VectorXd& y,
                       const Eigen::VectorXd& z, double epsilon0);

/// Bregman divergence of the strictly convex potential
/// kappa(xi) = (1/6) sum (phi_a + eps0)^3.
double bregman_divergence(const Eigen::VectorXd& xi, const Eigen::VectorXd& xi_prime,
                          double epsilon0);

/// Natural gradient of the linear expected-fitness functional J(xi) = <E, xi>
/// under the modified metric: entries E_a / (phi_a + eps0).
Eigen::VectorXd natural_gradient(const SimplexPoint& simplex, const Eigen::VectorXd& e,
                                 double epsilon0);

/// Projected natural-gradient ascent of J(xi) = <E, xi> over the closed
/// simplex. Each iterate moves along the natural gradient with step
/// step_size/(1+i), is projected orthogonally along the all-ones normal, then
/// clipped to [0,1] and renormalized. Stops after `steps` iterations or when
/// the update norm falls below 1e-10.
SimplexPoint natural_gradient_ascent(const Eigen::VectorXd& e, const SimplexPoint& xi0,
                                     long long steps, double step_size,
                                     double epsilon0);

/// Closed-form fixed point of the projected natural-gradient flow.
/// Maximization (all E_a > 0): phi_a = (E_a - eps0) / sum(E_b - eps0).
/// Minimization (all E_a < 0): phi_a = (-E_a - eps0) / sum(-E_b - eps0).
SimplexPoint fixed_point_coefficients(const Eigen::VectorXd& e, double epsilon0,
                                      OptimSense sense);

/// Zeroes the dropped coordinates and renormalizes the retained ones by their
/// sum. `retained` holds indices into xi. When the retained mass is zero the
/// result is uniform over the retained set and *degenerate is set.
SimplexPoint project_to_subsimplex(const SimplexPoint& xi,
                                   const std::vector<Eigen::Index>& retained,
                                   bool* degenerate = nullptr);

}  // namespace rmopt

#pragma once

// Flat-space reference implementations used as oracles for the manifold
// optimizers: plain SDFO, CMA-ES and PSO steps in R^d, written directly from
// their update equations. They share only the RNG and the truncated sampler
// with the library so that both sides consume identical random draws.

#include "rmopt/manifold.hpp"
#include "rmopt/rsdfo.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace euclid {

struct RankedDraw {
  Eigen::VectorXd z;
  double value;
  int index;
};

inline std::vector<RankedDraw> draw_and_rank(
    const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& mean,
    const Eigen::MatrixXd& cov, double sigma, double radius, int m1, rmopt::Rng& rng) {
  const Eigen::MatrixXd a = rmopt::symmetric_sqrt(cov);
  std::vector<RankedDraw> out;
  out.reserve(m1);
  for (int i = 0; i < m1; ++i) {
    Eigen::VectorXd z = rmopt::sample_truncated_gaussian_coords(a, sigma, radius, rng);
    const double v = f(mean + z);
    out.push_back({std::move(z), v, i});
  }
  std::stable_sort(out.begin(), out.end(), [](const RankedDraw& a, const RankedDraw& b) {
    if (a.value != b.value) return a.value < b.value;
    return a.index < b.index;
  });
  return out;
}

inline Eigen::VectorXd log_weights(int m2) {
  Eigen::VectorXd w(m2);
  double sum = 0.0;
  for (int i = 1; i <= m2; ++i) {
    w[i - 1] = std::log((m2 + 1.0) / i);
    sum += w[i - 1];
  }
  return w / sum;
}

struct SdfoResult {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

/// One generic SDFO step in R^d: rank, move the mean along the weighted mean
/// of the best m2 draws, re-estimate the covariance from them.
inline SdfoResult sdfo_step(const std::function<double(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                            double sigma, double radius, int m1, int m2,
                            rmopt::Rng& rng) {
  const auto ranked = draw_and_rank(f, mean, cov, sigma, radius, m1, rng);
  const Eigen::VectorXd w = log_weights(m2);
  Eigen::VectorXd step = Eigen::VectorXd::Zero(mean.size());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(mean.size(), mean.size());
  for (int i = 0; i < m2; ++i) {
    step += w[i] * ranked[i].z;
    c += w[i] * ranked[i].z * ranked[i].z.transpose();
  }
  return {mean + step, c};
}

struct CmaState {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  double sigma;
  Eigen::VectorXd p_sigma;
  Eigen::VectorXd p_c;
};

/// One CMA-ES step in R^d following the classical update equations.
inline CmaState cma_step(const std::function<double(const Eigen::VectorXd&)>& f,
                         const CmaState& s, const rmopt::CmaParams& p, double radius,
                         rmopt::Rng& rng) {
  const Eigen::Index d = s.mean.size();
  const auto ranked = draw_and_rank(f, s.mean, s.covariance, s.sigma, radius, p.m1, rng);

  Eigen::VectorXd recombined = Eigen::VectorXd::Zero(d);
  Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < p.m2; ++i) {
    recombined += p.weights[i] * ranked[i].z;
    rank_mu += p.weights[i] * ranked[i].z * ranked[i].z.transpose();
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.covariance);
  const Eigen::MatrixXd inv_sqrt = es.eigenvectors() *
                                   es.eigenvalues().cwiseMax(1e-12).cwiseSqrt().cwiseInverse().asDiagonal() *
                                   es.eigenvectors().transpose();

  const double decay = std::sqrt(1.0 - (1.0 - p.c_sigma) * (1.0 - p.c_sigma));
  const Eigen::VectorXd drift = (std::sqrt(p.m_eff) / s.sigma) * recombined;

  CmaState next;
  next.mean = s.mean + recombined;
  next.p_sigma = (1.0 - p.c_sigma) * s.p_sigma + decay * (inv_sqrt * drift);
  next.p_c = (1.0 - p.c_c) * s.p_c + decay * drift;
  next.covariance = p.c_cov * (1.0 - 1.0 / p.mu_cov) * (1.0 / (s.sigma * s.sigma)) * rank_mu +
                    (1.0 - p.c_cov) * s.covariance +
                    (p.c_cov / p.mu_cov) * next.p_c * next.p_c.transpose();
  next.sigma = s.sigma * std::exp((p.c_sigma / p.d_sigma) *
                                  (next.p_sigma.norm() / rmopt::expected_gaussian_norm(d) - 1.0));
  return next;
}

struct PsoParticle {
  Eigen::VectorXd position;
  Eigen::VectorXd velocity;
  Eigen::VectorXd personal_best;
};

/// One synchronous PSO velocity/position update in R^d; alpha and beta are the
/// per-particle uniform draws.
inline void pso_step(std::vector<PsoParticle>& swarm, const Eigen::VectorXd& global_best,
                     double inertia, double nostalgia, double social,
                     const std::vector<double>& alpha, const std::vector<double>& beta) {
  for (std::size_t i = 0; i < swarm.size(); ++i) {
    auto& p = swarm[i];
    p.velocity = inertia * p.velocity + nostalgia * alpha[i] * (p.personal_best - p.position) +
                 social * beta[i] * (global_best - p.position);
    p.position += p.velocity;
  }
}

}  // namespace euclid

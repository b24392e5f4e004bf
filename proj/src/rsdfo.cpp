#include "rmopt/rsdfo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace rmopt {

namespace {

constexpr double kEigenvalueFloor = 1e-12;

struct RankedSample {
  Eigen::VectorXd z;  // frame coordinates
  double value = 0.0;
  int index = 0;
};

/// Draws m1 samples, evaluates them through the exponential map and returns
/// them sorted ascending by objective value (stable under ties).
std::vector<RankedSample> sample_and_rank(const Manifold& M, const RsdfoState& state,
                                          const ObjectiveFn& f, int m1,
                                          double step_radius, Rng& rng,
                                          TruncatedSampleStats* stats) {
  const Eigen::MatrixXd cov_sqrt = symmetric_sqrt(state.covariance);
  std::vector<RankedSample> samples(static_cast<std::size_t>(m1));
  for (int i = 0; i < m1; ++i) {
    samples[i].z =
        sample_truncated_gaussian_coords(cov_sqrt, state.sigma, step_radius, rng, stats);
    samples[i].value = f(M.exp(state.mean, state.frame.vector(samples[i].z)));
    samples[i].index = i;
  }
  std::stable_sort(samples.begin(), samples.end(),
                   [](const RankedSample& a, const RankedSample& b) {
                     if (a.value != b.value) return a.value < b.value;
                     return a.index < b.index;
                   });
  return samples;
}

Eigen::VectorXd clip_step(Eigen::VectorXd step, double step_radius) {
  const double limit = 0.95 * step_radius;
  const double n = step.norm();
  if (n > limit) step *= limit / n;
  return step;
}

}  // namespace

RsdfoState make_rsdfo_state(const Manifold& M, const ManifoldPoint& x, Rng& rng) {
  RsdfoState s;
  s.mean = x;
  s.frame = orthonormal_frame(M, x, rng);
  s.covariance = Eigen::MatrixXd::Identity(M.dim(), M.dim());
  s.sigma = 1.0;
  s.p_sigma = Eigen::VectorXd::Zero(M.dim());
  s.p_c = Eigen::VectorXd::Zero(M.dim());
  return s;
}

Eigen::VectorXd cma_log_weights(int m2) {
  if (m2 < 1) throw std::invalid_argument("cma_log_weights: m2 must be >= 1");
  Eigen::VectorXd w(m2);
  for (int i = 1; i <= m2; ++i)
    w[i - 1] = std::log((static_cast<double>(m2) + 1.0) / static_cast<double>(i));
  return w / w.sum();
}

double expected_gaussian_norm(Eigen::Index dim) {
  const double n = static_cast<double>(dim);
  return std::sqrt(n) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));
}

CmaParams CmaParams::defaults(int m1, Eigen::Index dim) {
  if (m1 < 4) throw std::invalid_argument("CmaParams: m1 must be >= 4");
  CmaParams p;
  const double n = static_cast<double>(dim);
  p.m1 = m1;
  p.m2 = std::max(1, m1 / 4);
  p.weights = cma_log_weights(p.m2);
  p.m_eff = 1.0 / p.weights.squaredNorm();
  p.c_c = 4.0 / (n + 4.0);
  p.c_sigma = (p.m_eff + 2.0) / (n + p.m_eff + 3.0);
  p.mu_cov = p.m_eff;
  p.c_cov = 2.0 / (p.mu_cov * (n + std::sqrt(2.0)) * (n + std::sqrt(2.0))) +
            (1.0 - 1.0 / p.mu_cov) *
                std::min(1.0, (2.0 * p.mu_cov - 1.0) / ((n + 2.0) * (n + 2.0) + p.mu_cov));
  p.d_sigma = 1.0 + 2.0 * std::max(0.0, std::sqrt((p.m_eff - 1.0) / (n + 1.0))) + p.c_sigma;
  return p;
}

double cma_sigma_update(double sigma, double p_sigma_norm, Eigen::Index dim,
                        const CmaParams& params) {
  return sigma * std::exp((params.c_sigma / params.d_sigma) *
                          (p_sigma_norm / expected_gaussian_norm(dim) - 1.0));
}

RsdfoState rsdfo_step(const Manifold& M, const RsdfoState& state, const ObjectiveFn& f,
                      int parents_m1, int select_m2, double sample_radius,
                      double step_radius, Rng& rng, double sigma_v,
                      double improvement_tol) {
  if (state.terminated) throw std::logic_error("rsdfo_step: stream already terminated");
  if (parents_m1 < 1 || select_m2 < 1 || select_m2 > parents_m1)
    throw std::invalid_argument("rsdfo_step: need 1 <= m2 <= m1");

  RsdfoState next = state;
  const auto samples = sample_and_rank(M, state, f, parents_m1, sample_radius, rng,
                                       &next.sample_stats);
  const Eigen::VectorXd w = cma_log_weights(select_m2);

  Eigen::VectorXd mean_step = Eigen::VectorXd::Zero(M.dim());
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(M.dim(), M.dim());
  for (int i = 0; i < select_m2; ++i) {
    mean_step += w[i] * samples[i].z;
    cov += w[i] * samples[i].z * samples[i].z.transpose();
  }
  mean_step = clip_step(sigma_v * mean_step, step_radius);

  const ManifoldPoint new_mean = M.exp(state.mean, state.frame.vector(mean_step));
  next.covariance = floor_spd(cov, kEigenvalueFloor, &next.cov_repairs);

  const double best = samples.front().value;
  if (std::abs(state.last_batch_best - best) < improvement_tol) next.terminated = true;
  next.last_batch_best = best;
  next.best_value = std::min(state.best_value, best);
  next.iteration = state.iteration + 1;
  return transport_state(M, next, new_mean);
}

RsdfoState rcmaes_step(const Manifold& M, const RsdfoState& state, const ObjectiveFn& f,
                       const CmaParams& params, double sample_radius, double step_radius,
                       Rng& rng, double improvement_tol) {
  if (state.terminated) throw std::logic_error("rcmaes_step: stream already terminated");
  const Eigen::Index dim = M.dim();

  RsdfoState next = state;
  const auto samples = sample_and_rank(M, state, f, params.m1, sample_radius, rng,
                                       &next.sample_stats);

  Eigen::VectorXd recombined = Eigen::VectorXd::Zero(dim);
  Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < params.m2; ++i) {
    recombined += params.weights[i] * samples[i].z;
    rank_mu += params.weights[i] * samples[i].z * samples[i].z.transpose();
  }

  // Inverse square root of the (old) covariance for the isotropic path.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(state.covariance);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("rcmaes_step: covariance eigendecomposition failed");
  const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(kEigenvalueFloor);
  const Eigen::MatrixXd cov_inv_sqrt = es.eigenvectors() *
                                       ev.cwiseSqrt().cwiseInverse().asDiagonal() *
                                       es.eigenvectors().transpose();

  const double path_decay = std::sqrt(1.0 - (1.0 - params.c_sigma) * (1.0 - params.c_sigma));
  const Eigen::VectorXd drift = (std::sqrt(params.m_eff) / state.sigma) * recombined;

  next.p_sigma = (1.0 - params.c_sigma) * state.p_sigma + path_decay * (cov_inv_sqrt * drift);
  next.p_c = (1.0 - params.c_c) * state.p_c + path_decay * drift;

  const Eigen::MatrixXd updated =
      params.c_cov * (1.0 - 1.0 / params.mu_cov) * (1.0 / (state.sigma * state.sigma)) *
          rank_mu +
      (1.0 - params.c_cov) * state.covariance +
      (params.c_cov / params.mu_cov) * next.p_c * next.p_c.transpose();
  next.covariance = floor_spd(updated, kEigenvalueFloor, &next.cov_repairs);

  next.sigma = cma_sigma_update(state.sigma, next.p_sigma.norm(), dim, params);

  const Eigen::VectorXd mean_step = clip_step(recombined, step_radius);
  const ManifoldPoint new_mean = M.exp(state.mean, state.frame.vector(mean_step));

  const double best = samples.front().value;
  if (std::abs(state.last_batch_best - best) < improvement_tol) next.terminated = true;
  next.last_batch_best = best;
  next.best_value = std::min(state.best_value, best);
  next.iteration = state.iteration + 1;
  return transport_state(M, next, new_mean);
}

RsdfoState transport_state(const Manifold& M, const RsdfoState& state,
                           const ManifoldPoint& new_mean) {
  RsdfoState next = state;
  next.frame = transport_frame(M, state.frame, new_mean);
  next.mean = new_mean;
  return next;
}

}  // namespace rmopt

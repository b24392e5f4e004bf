#include "rmopt/simplex.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rmopt {

namespace {

std::vector<long long> default_labels(Eigen::Index n) {
  std::vector<long long> labels(static_cast<std::size_t>(n));
  std::iota(labels.begin(), labels.end(), 0);
  return labels;
}

}  // namespace

SimplexPoint::SimplexPoint(Eigen::VectorXd coefficients)
    : SimplexPoint(std::move(coefficients), {}) {}

SimplexPoint::SimplexPoint(Eigen::VectorXd coefficients, std::vector<long long> labels)
    : coefficients_(std::move(coefficients)), labels_(std::move(labels)) {
  if (coefficients_.size() == 0)
    throw std::invalid_argument("SimplexPoint: empty coefficient vector");
  if (labels_.empty()) labels_ = default_labels(coefficients_.size());
  if (static_cast<Eigen::Index>(labels_.size()) != coefficients_.size())
    throw std::invalid_argument("SimplexPoint: label/coefficient size mismatch");
  if (coefficients_.minCoeff() < -1e-9)
    throw std::invalid_argument("SimplexPoint: negative coefficient");
  const double sum = coefficients_.sum();
  if (std::abs(sum - 1.0) > 1e-6)
    throw std::invalid_argument("SimplexPoint: coefficients must sum to 1");
  coefficients_ = coefficients_.cwiseMax(0.0);
  coefficients_ /= coefficients_.sum();
}

ExpectedFitness expected_fitness(const Manifold& M,
                                 const std::function<double(const ManifoldPoint&)>& f,
                                 const ManifoldPoint& x, const OrthonormalFrame& frame,
                                 const Eigen::MatrixXd& covariance, double sigma,
                                 double radius, long long n_mc, Rng& rng,
                                 TruncatedSampleStats* stats) {
  if (n_mc <= 0) throw std::invalid_argument("expected_fitness: n_mc must be positive");
  const Eigen::MatrixXd a = symmetric_sqrt(covariance);
  double acc = 0.0;
  for (long long i = 0; i < n_mc; ++i) {
    const Eigen::VectorXd z = sample_truncated_gaussian_coords(a, sigma, radius, rng, stats);
    acc += f(M.exp(x, frame.vector(z)));
  }
  return ExpectedFitness{acc / static_cast<double>(n_mc), n_mc, -1};
}

double mixture_expected_fitness(const SimplexPoint& simplex, const Eigen::VectorXd& e) {
  if (simplex.size() != e.size())
    throw std::invalid_argument("mixture_expected_fitness: label mismatch");
  return simplex.coefficients().dot(e);
}

Eigen::VectorXd modified_metric_inverse(const SimplexPoint& simplex, double epsilon0) {
  if (epsilon0 <= 0.0)
    throw std::invalid_argument("modified_metric_inverse: epsilon0 must be positive");
  return (simplex.coefficients().array() + epsilon0).inverse().matrix();
}

double modified_metric(const SimplexPoint& xi, const Eigen::VectorXd& y,
                       const Eigen::VectorXd& z, double epsilon0) {
  if (y.size() != xi.size() || z.size() != xi.size())
    throw std::invalid_argument("modified_metric: dimension mismatch");
  return (y.array() * z.array() * (xi.coefficients().array() + epsilon0)).sum();
}

namespace {

double kappa(const Eigen::VectorXd& xi, double epsilon0) {
  return (xi.array() + epsilon0).cube().sum() / 6.0;
}

Eigen::VectorXd kappa_gradient(const Eigen::VectorXd& xi, double epsilon0) {
  return 0.5 * (xi.array() + epsilon0).square().matrix();
}

}  // namespace

double bregman_divergence(const Eigen::VectorXd& xi, const Eigen::VectorXd& xi_prime,
                          double epsilon0) {
  if (xi.size() != xi_prime.size())
    throw std::invalid_argument("bregman_divergence: dimension mismatch");
  return kappa(xi, epsilon0) - kappa(xi_prime, epsilon0) -
         kappa_gradient(xi_prime, epsilon0).dot(xi - xi_prime);
}

Eigen::VectorXd natural_gradient(const SimplexPoint& simplex, const Eigen::VectorXd& e,
                                 double epsilon0) {
  if (simplex.size() != e.size())
    throw std::invalid_argument("natural_gradient: label mismatch");
  return modified_metric_inverse(simplex, epsilon0).cwiseProduct(e);
}

namespace {

// Orthogonal projection along the all-ones normal onto the sum-to-one
// hyperplane, then clip to [0,1] and renormalize onto the closed simplex.
Eigen::VectorXd project_to_simplex(Eigen::VectorXd v) {
  const Eigen::Index n = v.size();
  v.array() -= (v.sum() - 1.0) / static_cast<double>(n);
  v = v.cwiseMax(0.0).cwiseMin(1.0);
  const double s = v.sum();
  if (s <= 0.0) return Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  return v / s;
}

}  // namespace

SimplexPoint natural_gradient_ascent(const Eigen::VectorXd& e, const SimplexPoint& xi0,
                                     long long steps, double step_size, double epsilon0) {
  if (e.size() != xi0.size())
    throw std::invalid_argument("natural_gradient_ascent: dimension mismatch");
  Eigen::VectorXd xi = xi0.coefficients();
  for (long long i = 0; i < steps; ++i) {
    const Eigen::VectorXd grad = e.array() / (xi.array() + epsilon0);
    // Direction after the orthogonal projection along the all-ones normal.
    const Eigen::VectorXd dir = grad.array() - grad.mean();
    // Step sizes must be small enough that the projected iterate stays inside
    // the simplex. Near the boundary the metric gradient scales like
    // 1/epsilon0, so the scheduled step is additionally capped to a bounded
    // per-coordinate move; the clip projection absorbs active coordinates.
    const double scale = dir.lpNorm<Eigen::Infinity>();
    if (scale == 0.0) break;
    const double s = std::min(step_size / static_cast<double>(1 + i), 0.25 / scale);
    const Eigen::VectorXd next = project_to_simplex(xi + s * dir);
    const double update = (next - xi).norm();
    xi = next;
    if (update < 1e-10) break;
  }
  return SimplexPoint(xi, xi0.labels());
}

SimplexPoint fixed_point_coefficients(const Eigen::VectorXd& e, double epsilon0,
                                      OptimSense sense) {
  Eigen::VectorXd w;
  if (sense == OptimSense::Maximize) {
    if (e.minCoeff() <= 0.0)
      throw std::invalid_argument(
          "fixed_point_coefficients: maximization requires strictly positive E");
    w = e.array() - epsilon0;
  } else {
    if (e.maxCoeff() >= 0.0)
      throw std::invalid_argument(
          "fixed_point_coefficients: minimization requires strictly negative E");
    w = -e.array() - epsilon0;
  }
  if (w.minCoeff() <= 0.0)
    throw std::invalid_argument("fixed_point_coefficients: |E| must exceed epsilon0");
  return SimplexPoint(w / w.sum());
}

SimplexPoint project_to_subsimplex(const SimplexPoint& xi,
                                   const std::vector<Eigen::Index>& retained,
                                   bool* degenerate) {
  if (retained.empty())
    throw std::invalid_argument("project_to_subsimplex: empty retained set");
  Eigen::VectorXd out(static_cast<Eigen::Index>(retained.size()));
  std::vector<long long> labels(retained.size());
  for (std::size_t i = 0; i < retained.size(); ++i) {
    const Eigen::Index idx = retained[i];
    if (idx < 0 || idx >= xi.size())
      throw std::invalid_argument("project_to_subsimplex: index out of range");
    out[static_cast<Eigen::Index>(i)] = xi[idx];
    labels[i] = xi.labels()[static_cast<std::size_t>(idx)];
  }
  const double mass = out.sum();
  if (degenerate) *degenerate = false;
  if (mass <= 0.0) {
    if (degenerate) *degenerate = true;
    out.setConstant(1.0 / static_cast<double>(out.size()));
    return SimplexPoint(out, std::move(labels));
  }
  return SimplexPoint(out / mass, std::move(labels));
}

}  // namespace rmopt

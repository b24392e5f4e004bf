#include "rmopt/extended_rsdfo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rmopt {

namespace {

// Stream tags for the per-run derived RNG streams.
constexpr std::uint64_t kTagSelect = 0x5e1ec7;
constexpr std::uint64_t kTagBoundary = 0xb0da27;
constexpr std::uint64_t kTagCore = 0xc02e55;
constexpr std::uint64_t kTagFrame = 0xf2a3e1;
constexpr std::uint64_t kTagFitness = 0xef1799;

}  // namespace

double exploration_tau(long long k, double a, double b, double floor_value) {
  if (k < 0) throw std::invalid_argument("exploration_tau: negative iteration");
  return std::max(floor_value, a * std::exp(-b * static_cast<double>(k)));
}

SelectResult select_centroids(const std::vector<Centroid>& centroids, double tau_k,
                              int n_random, Rng& rng) {
  if (tau_k < 0.0 || tau_k > 1.0)
    throw std::invalid_argument("select_centroids: tau outside [0, 1]");
  SelectResult out;
  std::vector<char> picked(centroids.size(), 0);
  for (int draw = 0; draw < n_random; ++draw) {
    if (rng.uniform() < tau_k) {
      ++out.exploration_requests;
      continue;
    }
    double mass = 0.0;
    for (std::size_t i = 0; i < centroids.size(); ++i)
      if (!picked[i]) mass += centroids[i].phi;
    if (mass <= 0.0) {
      // No positive-mass centroid left to pick without repeating.
      ++out.exploration_requests;
      continue;
    }
    const double u = rng.uniform() * mass;
    double acc = 0.0;
    std::size_t chosen = centroids.size();
    std::size_t last_positive = centroids.size();
    for (std::size_t i = 0; i < centroids.size(); ++i) {
      if (picked[i] || centroids[i].phi <= 0.0) continue;
      last_positive = i;
      acc += centroids[i].phi;
      if (u < acc) {
        chosen = i;
        break;
      }
    }
    if (chosen == centroids.size()) chosen = last_positive;  // u == mass edge
    picked[chosen] = 1;
    out.picks.push_back(chosen);
  }
  return out;
}

std::vector<ManifoldPoint> boundary_sample(const Manifold& M, const ExploredRegion& region,
                                           const BoundaryProtocol& protocol, int want,
                                           Rng& rng) {
  std::vector<ManifoldPoint> accepted;
  if (region.balls.empty() || want <= 0) return accepted;

  // Pick distinct explored balls at random (all of them when few).
  const std::size_t n = region.balls.size();
  const std::size_t n_pick = std::min<std::size_t>(static_cast<std::size_t>(protocol.pick), n);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = 0; i < n_pick; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(order[i], order[j]);
  }

  const auto outside_every_ball = [&](const ManifoldPoint& y) {
    for (const auto& ball : region.balls)
      if (M.distance(ball.point, y) < ball.radius - 1e-9) return false;
    return true;
  };

  for (std::size_t i = 0; i < n_pick; ++i) {
    const auto& ball = region.balls[order[i]];
    const OrthonormalFrame frame = orthonormal_frame(M, ball.point, rng);
    for (int s = 0; s < protocol.per_centroid; ++s) {
      const ManifoldPoint y = sample_geodesic_sphere(M, frame, ball.radius, rng);
      if (outside_every_ball(y)) {
        accepted.push_back(y);
        if (static_cast<int>(accepted.size()) >= want) return accepted;
      }
    }
  }
  return accepted;
}

std::vector<std::size_t> cull(const std::vector<Centroid>& interim, int n_cull,
                              OptimSense sense) {
  std::vector<std::size_t> order(interim.size());
  for (std::size_t i = 0; i < interim.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ea = interim[a].expected_fitness;
    const double eb = interim[b].expected_fitness;
    if (ea != eb) return sense == OptimSense::Maximize ? ea > eb : ea < eb;
    return interim[a].id < interim[b].id;
  });
  const std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(n_cull),
                                                 interim.size());
  order.resize(keep);
  return order;
}

ExtendedRsdfo::ExtendedRsdfo(const Manifold& M, ExtendedConfig config,
                             std::vector<ManifoldPoint> initial, std::uint64_t seed)
    : manifold_(M), config_(std::move(config)), seed_(seed) {
  if (initial.empty()) throw std::invalid_argument("ExtendedRsdfo: no initial centroids");
  if (config_.n_random < 1 || config_.n_cull < 1)
    throw std::invalid_argument("ExtendedRsdfo: n_random and n_cull must be positive");
  if (!(config_.epsilon_b > 0.0 && config_.epsilon_b <= 1.0))
    throw std::invalid_argument("ExtendedRsdfo: epsilon_b must be in (0, 1]");
  if (config_.core == CoreKind::Rcmaes)
    cma_params_ = CmaParams::defaults(config_.cma_parents, M.dim());
  if (config_.objective_shift) {
    shift_ = *config_.objective_shift;
    shift_fixed_ = true;
  }
  for (const auto& x : initial) {
    Centroid c = make_centroid(x, CentroidOrigin::Initial);
    c.phi = 1.0 / static_cast<double>(initial.size());
    region_.balls.push_back({c.point, c.radius, c.id, c.origin});
    centroids_.push_back(std::move(c));
  }
}

Centroid ExtendedRsdfo::make_centroid(const ManifoldPoint& x, CentroidOrigin origin) {
  Centroid c;
  c.id = next_id_++;
  c.point = x;
  c.radius = config_.epsilon_b * manifold_.injectivity_radius(x);
  Rng frame_rng(derive_seed(seed_, kTagFrame, static_cast<std::uint64_t>(c.id)));
  c.core = make_rsdfo_state(manifold_, x, frame_rng);
  c.origin = origin;
  return c;
}

double ExtendedRsdfo::translated(double raw_e) const {
  return config_.sense == OptimSense::Maximize ? raw_e + shift_ : raw_e - shift_;
}

void ExtendedRsdfo::refresh_shift(const std::vector<double>& raw_values) {
  if (shift_fixed_) return;
  // Ratchet keeping the strict sign contract with unit margin: maximization
  // wants every translated E >= 1, minimization <= -1.
  for (const double raw : raw_values) {
    if (config_.sense == OptimSense::Maximize)
      shift_ = std::max(shift_, 1.0 - raw);
    else
      shift_ = std::max(shift_, 1.0 + raw);
  }
}

Centroid ExtendedRsdfo::step_core(const Centroid& pick, SignalingEvaluator& eval) {
  Rng core_rng(derive_seed(seed_, kTagCore, static_cast<std::uint64_t>(iteration_),
                           static_cast<std::uint64_t>(pick.id)));
  ObjectiveFn f_core;
  if (config_.sense == OptimSense::Minimize)
    f_core = [&eval](const ManifoldPoint& p) { return eval(p); };
  else
    f_core = [&eval](const ManifoldPoint& p) { return -eval(p); };

  // The core works on the full normal neighbourhood: epsilon_b rescales only
  // the exploration-region balls, not Algorithm-level sampling or steps.
  const double inj = manifold_.injectivity_radius(pick.point);
  const RsdfoState stepped =
      config_.core == CoreKind::Generic
          ? rsdfo_step(manifold_, pick.core, f_core, config_.core_parents,
                       config_.core_offspring, inj, inj, core_rng, 1.0,
                       config_.improvement_tol)
          : rcmaes_step(manifold_, pick.core, f_core, cma_params_, inj, inj, core_rng,
                        config_.improvement_tol);

  sample_fallbacks_ += stepped.sample_stats.fallbacks - pick.core.sample_stats.fallbacks;
  cov_repairs_ += stepped.cov_repairs - pick.core.cov_repairs;

  Centroid offspring;
  offspring.id = next_id_++;
  offspring.point = stepped.mean;
  offspring.radius = config_.epsilon_b * manifold_.injectivity_radius(stepped.mean);
  offspring.core = stepped;
  offspring.origin = CentroidOrigin::Offspring;
  return offspring;
}

void ExtendedRsdfo::estimate_expected_fitness(Centroid& c, SignalingEvaluator& eval) {
  const std::uint64_t iteration_tag =
      config_.frozen_e_seeds ? 0 : static_cast<std::uint64_t>(iteration_ + 1);
  Rng e_rng(derive_seed(seed_, kTagFitness, iteration_tag, static_cast<std::uint64_t>(c.id)));
  TruncatedSampleStats stats;
  const ExpectedFitness e = expected_fitness(
      manifold_, [&eval](const ManifoldPoint& p) { return eval(p); }, c.point,
      c.core.frame, c.core.covariance, c.core.sigma, c.radius, config_.mc_samples, e_rng,
      &stats);
  sample_fallbacks_ += stats.fallbacks;
  c.expected_fitness = e.value;
  c.e_samples = e.mc_samples;
}

bool ExtendedRsdfo::all_retained_terminated() const {
  for (const auto& c : centroids_)
    if (!c.core.terminated) return false;
  return true;
}

void ExtendedRsdfo::step(SignalingEvaluator& eval) {
  const long long k = iteration_;
  const double tau_k =
      exploration_tau(k, config_.tau_a, config_.tau_b, config_.tau_floor);

  Rng select_rng(derive_seed(seed_, kTagSelect, static_cast<std::uint64_t>(k)));
  const SelectResult sel =
      select_centroids(centroids_, tau_k, config_.n_random, select_rng);

  // Theoretical mode forces exactly one boundary exploration per iteration,
  // which keeps every accepted boundary point separated from all previous
  // ones by at least the smallest ball radius.
  int want = sel.exploration_requests;
  if (config_.termination == TerminationMode::Theoretical) want = 1;

  std::vector<ManifoldPoint> boundary_points;
  if (want > 0) {
    Rng boundary_rng(derive_seed(seed_, kTagBoundary, static_cast<std::uint64_t>(k)));
    boundary_points =
        boundary_sample(manifold_, region_, config_.boundary, want, boundary_rng);
  }
  const bool boundary_empty = want > 0 && boundary_points.empty();

  // Interim population: retained centroids, fresh boundary centroids (which
  // join with their fresh state and step only once selected in a later
  // iteration), and one offspring per non-terminated selected centroid.
  std::vector<Centroid> interim = centroids_;
  std::vector<Centroid> fresh;
  for (const auto& y : boundary_points)
    fresh.push_back(make_centroid(y, CentroidOrigin::Boundary));

  for (const std::size_t idx : sel.picks) {
    if (centroids_[idx].core.terminated) continue;
    fresh.push_back(step_core(centroids_[idx], eval));
  }
  interim.insert(interim.end(), fresh.begin(), fresh.end());

  // Expected fitness for every interim centroid, fresh seeds per iteration
  // unless the frozen mode is on.
  std::vector<double> raw(interim.size());
  for (std::size_t i = 0; i < interim.size(); ++i) {
    estimate_expected_fitness(interim[i], eval);
    raw[i] = interim[i].expected_fitness;
  }
  refresh_shift(raw);

  const std::vector<std::size_t> retained_idx = cull(interim, config_.n_cull, config_.sense);

  Eigen::VectorXd translated_e(static_cast<Eigen::Index>(retained_idx.size()));
  std::vector<long long> labels(retained_idx.size());
  for (std::size_t i = 0; i < retained_idx.size(); ++i) {
    translated_e[static_cast<Eigen::Index>(i)] = translated(interim[retained_idx[i]].expected_fitness);
    labels[i] = interim[retained_idx[i]].id;
  }
  const SimplexPoint coefficients =
      fixed_point_coefficients(translated_e, config_.epsilon0, config_.sense);

  std::vector<Centroid> retained;
  retained.reserve(retained_idx.size());
  for (std::size_t i = 0; i < retained_idx.size(); ++i) {
    Centroid c = interim[retained_idx[i]];
    c.phi = coefficients[static_cast<Eigen::Index>(i)];
    retained.push_back(std::move(c));
  }
  std::sort(retained.begin(), retained.end(),
            [](const Centroid& a, const Centroid& b) { return a.id < b.id; });

  // Commit.
  for (const auto& c : fresh) region_.balls.push_back({c.point, c.radius, c.id, c.origin});
  centroids_ = std::move(retained);
  mixture_trace_.push_back(mixture_expected_fitness(
      SimplexPoint(coefficients.coefficients(), coefficients.labels()), translated_e));
  last_boundary_empty_ = boundary_empty;
  ++iteration_;
}

RunRecord ExtendedRsdfo::run(SignalingEvaluator& eval) {
  RunRecord record;
  record.algorithm = "ext-rsdfo";
  try {
    while (iteration_ < config_.max_iterations) {
      if (eval.budget_exhausted()) break;
      step(eval);
      record.best_trace.push_back(eval.best_value());
      if (config_.termination == TerminationMode::Practical && all_retained_terminated()) {
        record.terminated_naturally = true;
        break;
      }
      if (config_.termination == TerminationMode::Theoretical && last_boundary_empty_) {
        record.terminated_naturally = true;
        break;
      }
    }
  } catch (const BudgetExhaustedSignal&) {
  } catch (const TargetHitSignal&) {
  }
  if (record.best_trace.empty() || record.best_trace.back() != eval.best_value())
    record.best_trace.push_back(eval.best_value());
  record.best_value = eval.best_value();
  record.best_point = eval.best_point();
  record.evaluations = eval.count();
  record.iterations = iteration_;
  record.target_hit = eval.target_hit();
  record.mixture_fitness_trace = mixture_trace_;
  record.sample_fallbacks = sample_fallbacks_;
  record.cov_repairs = cov_repairs_;
  record.objective_shift = shift_;
  return record;
}

}  // namespace rmopt

#pragma once

#include "rmopt/record.hpp"
#include "rmopt/rsdfo.hpp"
#include "rmopt/simplex.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace rmopt {

/// Signals thrown by Evaluator-side budget/target latches; run drivers catch
/// them to close a run, discarding any half-built step.
struct BudgetExhaustedSignal {};
struct TargetHitSignal {};

/// Evaluator variant that throws the signals above: the budget is checked
/// before the call (so the counter never exceeds it) and the target after.
class SignalingEvaluator : public Evaluator {
 public:
  using Evaluator::Evaluator;

  double operator()(const ManifoldPoint& p) {
    if (budget_exhausted()) throw BudgetExhaustedSignal{};
    const double v = Evaluator::operator()(p);
    if (target_hit()) throw TargetHitSignal{};
    return v;
  }
};

enum class CentroidOrigin : std::uint8_t { Initial, Offspring, Boundary };
enum class CoreKind : std::uint8_t { Generic, Rcmaes };
enum class TerminationMode : std::uint8_t { Practical, Theoretical };

/// One search centroid: the ball it owns, its local core state, and its
/// latest expected-fitness estimate and mixture coefficient. Centroids are
/// immutable once created; core steps spawn offspring centroids.
struct Centroid {
  long long id = -1;
  ManifoldPoint point;
  double radius = 0.0;  // epsilon_b * injectivity radius at point
  RsdfoState core;
  double expected_fitness = std::numeric_limits<double>::quiet_NaN();  // raw scale
  long long e_samples = 0;
  double phi = 0.0;
  CentroidOrigin origin = CentroidOrigin::Initial;
};

/// Accumulated centroid balls over the whole run, including culled ones.
/// Append-only.
struct ExploredRegion {
  struct Ball {
    ManifoldPoint point;
    double radius;
    long long id;
    CentroidOrigin origin;
  };
  std::vector<Ball> balls;
};

struct BoundaryProtocol {
  int pick = 5;         // explored centroids sampled per call
  int per_centroid = 50;  // candidates per picked centroid
};

struct ExtendedConfig {
  int n_random = 2;
  int n_cull = 2;
  double epsilon0 = 1e-8;
  double epsilon_b = 1.0;
  double tau_a = 0.6;
  double tau_b = 0.015;
  double tau_floor = 1e-3;
  long long mc_samples = 10;
  CoreKind core = CoreKind::Generic;
  OptimSense sense = OptimSense::Minimize;
  int core_parents = 50;    // generic core
  int core_offspring = 10;  // generic core
  int cma_parents = 40;     // RCMA-ES core
  BoundaryProtocol boundary;
  bool frozen_e_seeds = false;
  TerminationMode termination = TerminationMode::Practical;
  double improvement_tol = 1e-14;
  long long max_iterations = 1000000;
  /// Optional fixed run-level translation of E values; when absent a
  /// monotone ratchet keeps the sign contract.
  std::optional<double> objective_shift;
};

/// Exploration schedule a * exp(-b k), floored at floor_value.
double exploration_tau(long long k, double a, double b, double floor_value);

struct SelectResult {
  std::vector<std::size_t> picks;  // indices into the centroid vector, no repeats
  int exploration_requests = 0;
};

/// Draws n_random non-repeating choices from the exploration mixture
/// (1 - tau) sum phi_a delta_a + tau U: each draw is an exploration request
/// with probability tau, otherwise a coefficient-weighted pick among the
/// not-yet-picked centroids; draws with no positive-mass centroid left fall
/// through to exploration requests.
SelectResult select_centroids(const std::vector<Centroid>& centroids, double tau_k,
                              int n_random, Rng& rng);

/// Uniform boundary exploration with acceptance-rejection: picks up to
/// `protocol.pick` explored balls at random, draws `protocol.per_centroid`
/// points on each geodesic sphere and keeps a candidate y only when
/// d(x_b, y) >= radius_b - 1e-9 for every accumulated ball b. Returns at most
/// `want` accepted points; empty output is a valid result.
std::vector<ManifoldPoint> boundary_sample(const Manifold& M, const ExploredRegion& region,
                                           const BoundaryProtocol& protocol, int want,
                                           Rng& rng);

/// Indices of the fittest n_cull centroids (raw E, largest for maximization,
/// smallest for minimization; ties broken by smaller creation id). Retains
/// everything when the interim set is smaller than n_cull.
std::vector<std::size_t> cull(const std::vector<Centroid>& interim, int n_cull,
                              OptimSense sense);

/// The population driver: owns one run's centroid set, explored region,
/// translation state and iteration loop.
class ExtendedRsdfo {
 public:
  ExtendedRsdfo(const Manifold& M, ExtendedConfig config,
                std::vector<ManifoldPoint> initial, std::uint64_t seed);

  /// One full iteration: select -> evolve -> interim -> expected fitness ->
  /// cull -> recalibrate -> append to the explored region. Throws the
  /// evaluator signals through; internal state is only committed on success.
  void step(SignalingEvaluator& eval);

  /// Loops step() until the termination criterion, the success target or the
  /// budget closes the run, and assembles the record.
  RunRecord run(SignalingEvaluator& eval);

  const std::vector<Centroid>& centroids() const { return centroids_; }
  const ExploredRegion& region() const { return region_; }
  long long iteration() const { return iteration_; }
  const std::vector<double>& mixture_fitness_trace() const { return mixture_trace_; }
  double objective_shift() const { return shift_; }
  bool last_boundary_empty() const { return last_boundary_empty_; }
  bool all_retained_terminated() const;

 private:
  double translated(double raw_e) const;
  void refresh_shift(const std::vector<double>& raw_values);
  Centroid make_centroid(const ManifoldPoint& x, CentroidOrigin origin);
  Centroid step_core(const Centroid& pick, SignalingEvaluator& eval);
  void estimate_expected_fitness(Centroid& c, SignalingEvaluator& eval);

  const Manifold& manifold_;
  ExtendedConfig config_;
  std::uint64_t seed_;
  CmaParams cma_params_;
  std::vector<Centroid> centroids_;
  ExploredRegion region_;
  long long iteration_ = 0;
  long long next_id_ = 0;
  double shift_ = 0.0;
  bool shift_fixed_ = false;
  bool last_boundary_empty_ = false;
  std::vector<double> mixture_trace_;
  long long sample_fallbacks_ = 0;
  long long cov_repairs_ = 0;
};

}  // namespace rmopt

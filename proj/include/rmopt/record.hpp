#pragma once

#include "rmopt/rsdfo.hpp"
#include "rmopt/types.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace rmopt {

/// Declarative success rule checked on every objective evaluation.
struct SuccessRule {
  enum class Kind { None, ValueBelow, ValueNear };
  Kind kind = Kind::None;
  double target = 0.0;
  double tolerance = 0.0;

  bool met(double value) const {
    switch (kind) {
      case Kind::None: return false;
      case Kind::ValueBelow: return value <= target + tolerance;
      case Kind::ValueNear: return std::abs(value - target) <= tolerance;
    }
    return false;
  }
};

/// Objective wrapper owning the budget ledger: every call increments exactly
/// one counter, tracks the incumbent, and latches the success rule.
class Evaluator {
 public:
  Evaluator(ObjectiveFn f, long long budget, OptimSense sense = OptimSense::Minimize,
            SuccessRule rule = {})
      : f_(std::move(f)), budget_(budget), sense_(sense), rule_(rule) {
    best_value_ = sense_ == OptimSense::Minimize
                      ? std::numeric_limits<double>::infinity()
                      : -std::numeric_limits<double>::infinity();
  }

  double operator()(const ManifoldPoint& p) {
    ++count_;
    const double v = f_(p);
    const bool improved =
        sense_ == OptimSense::Minimize ? v < best_value_ : v > best_value_;
    if (improved) {
      best_value_ = v;
      best_point_ = p;
    }
    if (rule_.met(v)) target_hit_ = true;
    return v;
  }

  long long count() const { return count_; }
  long long budget() const { return budget_; }
  bool budget_exhausted() const { return count_ >= budget_; }
  bool target_hit() const { return target_hit_; }
  double best_value() const { return best_value_; }
  const ManifoldPoint& best_point() const { return best_point_; }

 private:
  ObjectiveFn f_;
  long long budget_ = 0;
  OptimSense sense_;
  SuccessRule rule_;
  long long count_ = 0;
  double best_value_ = 0.0;
  ManifoldPoint best_point_;
  bool target_hit_ = false;
};

/// Everything one run produced, sufficient to reproduce tables and plots.
struct RunRecord {
  std::uint64_t seed = 0;
  std::string spec;
  std::string algorithm;
  std::string objective;
  double best_value = std::numeric_limits<double>::infinity();
  ManifoldPoint best_point;
  long long evaluations = 0;
  long long iterations = 0;
  std::string convergence_class;
  bool target_hit = false;
  bool terminated_naturally = false;
  std::vector<double> best_trace;             // best value after each iteration
  std::vector<double> mixture_fitness_trace;  // population algorithms only
  long long sample_fallbacks = 0;
  long long cov_repairs = 0;
  long long log_failures = 0;
  double objective_shift = 0.0;  // run-level translation applied to E values
};

}  // namespace rmopt

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace rmopt {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// 64-bit finalizer (murmur3 style), used to derive stream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

/// Deterministically derives an independent stream seed from a base seed and
/// up to three tags. Distinct tag tuples give unrelated streams.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t t0,
                                 std::uint64_t t1 = 0, std::uint64_t t2 = 0) {
  std::uint64_t s = mix64(base ^ 0x5851f42d4c957f2dULL);
  s = mix64(s ^ (t0 + 0x9e3779b97f4a7c15ULL));
  s = mix64(s ^ (t1 + 0xbf58476d1ce4e5b9ULL));
  s = mix64(s ^ (t2 + 0x94d049bb133111ebULL));
  return s;
}

/// Seeded random source. State is never shared: workers receive their own
/// instance, child streams are addressed explicitly through spawn().
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  std::uint64_t seed() const { return seed_; }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Standard normal deviate (Box-Muller, second value cached).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = kTwoPi * uniform();
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

  Eigen::VectorXd normal_vector(Eigen::Index n) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v = 0;
    do {
      v = gen_();
    } while (v >= limit);
    return v % bound;
  }

  /// Independent child stream addressed by tags (derived from the seed this
  /// instance was constructed with, not from its current state).
  Rng spawn(std::uint64_t t0, std::uint64_t t1 = 0, std::uint64_t t2 = 0) const {
    return Rng(derive_seed(seed_, t0, t1, t2));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace rmopt

#pragma once

#include "rmopt/grassmann.hpp"
#include "rmopt/jacobs_ladder.hpp"
#include "rmopt/record.hpp"
#include "rmopt/sphere.hpp"

#include <memory>
#include <string>
#include <vector>

namespace rmopt {

/// Multi-modal benchmark on S^2 in latitude/longitude coordinates
/// (theta = asin(z) in [-pi/2, pi/2], phi = atan2(y, x) wrapped to [0, 2pi)):
/// f = -2 cos(6 theta) + 2 cos(12 phi) + (pi/12 - phi)^2 + 3.5 theta^2 + 4,
/// with global minimum 0 at (0, pi/12).
double sphere_objective(double theta, double phi);
double sphere_objective_value(const ManifoldPoint& p);

/// Radial Gramacy-Lee profile sin(10 pi d)/(2 d) + (d - 1)^4 with the d -> 0
/// limit 5 pi.
double gramacy_lee_profile(double d);

/// Location and value of the profile minimum over (0, pi/2], found by a fine
/// scan plus golden-section refinement (deterministic).
struct ProfileMinimum {
  double d = 0.0;
  double value = 0.0;
};
ProfileMinimum gramacy_lee_minimum();

/// Composition of the radial profile with the Grassmann distance to the
/// identity representative.
double grassmann_objective_value(const GrassmannManifold& gr, const ManifoldPoint& x);

/// Torus-level part of the ladder objective: 0.05 on the optimal tori
/// {0, 15, -25}; elsewhere [1.05 - sinc(0.8 (n - c))^2] * |n/20|^(1/10) with
/// the sinc centered at the nearest declared optimum c of the branch
/// (c = 15 for n > 15/2, c = -25 for n < -15/2, c = 0 otherwise). Strictly
/// positive, with global minima exactly on the declared tori.
double jacobs_fG(long long n);

/// Levy N.13 in radians, shifted by +35; global minimum 35 at (1, 1).
double jacobs_fL(double theta, double phi);

/// Product objective f_G * f_L on Jacob's ladder; global minimum 1.75.
double jacobs_objective_value(const JacobsLadderManifold& jl, const ManifoldPoint& p);

inline constexpr long long kLadderOptimalTori[] = {0, 15, -25};
bool ladder_torus_optimal(long long n);
/// Both angles within 0.1 rad of the in-torus optimum (1, 1).
bool ladder_angles_optimal(double theta, double phi);

struct LadderInitBounds {
  long long torus_min = -30;
  long long torus_max = 30;
};

/// Uniform random point: sphere via normalized Gaussian, Grassmann via
/// sign-fixed QR of a Gaussian matrix, ladder via uniform torus index within
/// bounds and uniform angles.
ManifoldPoint random_initial(const Manifold& M, Rng& rng,
                             const LadderInitBounds& bounds = {});

/// A named benchmark: manifold, objective, documented optimum and the success
/// rule used for run classification and early stopping.
struct Objective {
  std::string id;
  std::shared_ptr<const Manifold> manifold;
  ObjectiveFn fn;
  OptimSense sense = OptimSense::Minimize;
  double optimum_value = 0.0;
  std::vector<ManifoldPoint> optima;
  SuccessRule success;
  LadderInitBounds init_bounds;
};

/// Builds one of the benchmark objectives: "s2", "gr24", "gr25" or "jl".
Objective make_objective(const std::string& id);

}  // namespace rmopt

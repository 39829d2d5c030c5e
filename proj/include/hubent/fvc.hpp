#pragma once

#include "hubent/entropy.hpp"

namespace hubent {

// Homogeneous per-site ground-state energy of the 1D Hubbard chain in the
// closed-form FVC parametrization
//
//   e0(n,U) = -(2 beta / pi) sin(pi n / beta),  beta = b(U)^alpha,
//   alpha = n^(U^(1/3) / 8),
//
// where b(U) in [1,2] reproduces the exact Lieb-Wu energy at half filling.
// Densities n > 1 use the particle-hole identity e0(n) = e0(2-n) + U (n-1).

/// Smallest positive U accepted by the numerical branch; U = 0 is handled
/// analytically and (0, kNumericalFloorU) is rejected.
inline constexpr double kNumericalFloorU = 0.05;
/// Smallest U at which interaction derivatives (double occupancy) are taken.
inline constexpr double kDerivativeFloorU = 0.2;
inline constexpr double kDerivativeStep = 1e-3;

double bessel_j0(double x);
double bessel_j1(double x);

struct LiebWuIntegral {
  double value = 0.0;
  double error_estimate = 0.0;  // quadrature estimate plus tail bound
  int panels = 0;
};

/// -4 * integral_0^inf J0(x) J1(x) / (x (1 + exp(U x / 2))) dx, integrated
/// panel by panel between consecutive zeros of J0 J1.
LiebWuIntegral lieb_wu_integral(double interaction);
inline double lieb_wu_rhs(double interaction) { return lieb_wu_integral(interaction).value; }

/// -(2 b / pi) sin(pi / b); strictly decreasing from 0 at b = 1 to -4/pi at b = 2.
double lieb_wu_lhs(double b);

/// Root of lieb_wu_lhs(b) = lieb_wu_rhs(U) on [1, 2] by bisection.
double solve_b(double interaction);

/// solve_b() behind a process-wide read-through cache keyed by U.
double cached_b(double interaction);

struct FvcEvaluation {
  double interaction = 0.0;
  double b = 2.0;
  double alpha = 1.0;
  double beta = 2.0;
  double e0 = 0.0;
};

/// Parameters and energy at (n, U); for n > 1, alpha and beta refer to the
/// particle-hole image 2 - n.
FvcEvaluation evaluate_fvc(double density, double interaction);

double e0_fvc(double density, double interaction);

/// The n <= 1 formula taken at any density in (0, 2); past n = 1 it is the
/// analytic continuation of the lower branch across the Mott point.
double e0_lower_branch(double density, double interaction);

/// w2 = d e0 / dU by a central difference (step 1e-3) with one Richardson
/// refinement. Requires U >= kDerivativeFloorU.
double double_occupancy(double density, double interaction);

struct HomogeneousEntropies {
  double von_neumann = 0.0;
  double linear = 0.0;
  double double_occupancy = 0.0;
  OccupationProbabilities probabilities;
};

HomogeneousEntropies homogeneous_entropies(double density, double interaction);

}  // namespace hubent

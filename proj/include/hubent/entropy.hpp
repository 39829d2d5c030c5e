#pragma once

#include <array>
#include <optional>
#include <span>

namespace hubent {

// Diagonal of the single-site reduced density matrix in the occupation basis
// {up, down, double, empty}. Off-diagonal elements vanish at fixed N_up,
// N_down, so this 4-vector is the whole reduced state.
struct OccupationProbabilities {
  double up = 0.0;
  double down = 0.0;
  double dbl = 0.0;
  double empty = 0.0;

  std::array<double, 4> values() const noexcept { return {up, down, dbl, empty}; }

  // Clamps components in [-1e-9, 0) to zero; anything below -1e-6, above
  // 1 + 1e-9, or a sum off 1 by more than 1e-9 raises ProbabilityDomain.
  static OccupationProbabilities checked(double up, double down, double dbl, double empty);
};

inline constexpr double kClampTolerance = 1e-9;
inline constexpr double kHardNegative = -1e-6;

/// w_up = w_down = n/2 - w2, w_empty = 1 - w_up - w_down - w2.
OccupationProbabilities probs_from_density(double density, double double_occupancy);

/// von Neumann entropy normalized by ln 4; 0 ln 0 = 0.
double von_neumann(const OccupationProbabilities& p);

/// Linear entropy (4/3)(1 - sum w^2).
double linear(const OccupationProbabilities& p);

/// Partial sum to `order` of the logarithm's expansion around w = 1 inside the
/// von Neumann entropy. Order 1 equals 3 / (4 ln 4) times the linear entropy.
double taylor_entropy(const OccupationProbabilities& p, int order);

inline constexpr int kMaxExpansionOrder = 200;

struct MonotoneOrder {
  std::optional<int> order;  // empty when no order up to kMaxExpansionOrder works
  int best_order = 0;        // order with the fewest increasing steps
  int violations = 0;        // increasing steps at best_order
};

/// Smallest expansion order whose entropy is non-increasing in U along
/// `u_grid`, with probabilities from the homogeneous FVC functional at
/// filling `density`.
MonotoneOrder minimal_monotone_order(double density, std::span<const double> u_grid);

}  // namespace hubent

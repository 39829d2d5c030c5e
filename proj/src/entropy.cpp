#include "hubent/entropy.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "hubent/errors.hpp"
#include "hubent/fvc.hpp"

namespace hubent {

namespace {

const double kLn4 = std::log(4.0);

double clamp_component(double w, const char* name) {
  if (!std::isfinite(w) || w < kHardNegative || w > 1.0 + kClampTolerance)
    fail(ErrorKind::ProbabilityDomain,
         std::string("occupation probability ") + name + " = " + std::to_string(w) +
             " outside [0,1]");
  if (w < 0.0) {
    if (w < -kClampTolerance)
      fail(ErrorKind::ProbabilityDomain,
           std::string("occupation probability ") + name + " = " + std::to_string(w) +
               " is negative beyond the clamping tolerance");
    return 0.0;
  }
  return std::min(w, 1.0);
}

}  // namespace

OccupationProbabilities OccupationProbabilities::checked(double up, double down, double dbl,
                                                         double empty) {
  OccupationProbabilities p{clamp_component(up, "w_up"), clamp_component(down, "w_down"),
                            clamp_component(dbl, "w_double"), clamp_component(empty, "w_empty")};
  const double sum = p.up + p.down + p.dbl + p.empty;
  if (std::abs(sum - 1.0) > kClampTolerance)
    fail(ErrorKind::ProbabilityDomain,
         "occupation probabilities sum to " + std::to_string(sum) + " instead of 1");
  return p;
}

OccupationProbabilities probs_from_density(double density, double double_occupancy) {
  if (!(density >= -kClampTolerance && density <= 2.0 + kClampTolerance))
    fail(ErrorKind::ProbabilityDomain, "density " + std::to_string(density) + " outside [0,2]");
  const double single = density / 2.0 - double_occupancy;
  const double empty = 1.0 - 2.0 * single - double_occupancy;
  return OccupationProbabilities::checked(single, single, double_occupancy, empty);
}

double von_neumann(const OccupationProbabilities& p) {
  double s = 0.0;
  for (double w : p.values())
    if (w > 0.0) s -= w * std::log(w);
  return s / kLn4;
}

double linear(const OccupationProbabilities& p) {
  double purity = 0.0;
  for (double w : p.values()) purity += w * w;
  return 4.0 / 3.0 * (1.0 - purity);
}

double taylor_entropy(const OccupationProbabilities& p, int order) {
  if (order < 1) fail(ErrorKind::InvalidOrder, "expansion order must be >= 1");
  double total = 0.0;
  for (double w : p.values()) {
    const double x = w - 1.0;
    double power = 1.0;
    double series = 0.0;
    for (int m = 1; m <= order; ++m) {
      power *= x;
      series += (m % 2 == 1 ? power : -power) / m;
    }
    total += w * series;
  }
  return -total / kLn4;
}

MonotoneOrder minimal_monotone_order(double density, std::span<const double> u_grid) {
  if (!(density > 0.0 && density <= 1.0))
    fail(ErrorKind::InvalidInput, "density must lie in (0,1]");
  if (u_grid.size() < 2) fail(ErrorKind::InvalidInput, "U grid needs at least two points");
  for (std::size_t i = 0; i < u_grid.size(); ++i) {
    if (u_grid[i] < kDerivativeFloorU - 1e-12)
      fail(ErrorKind::UnsupportedRegime, "U grid points must be >= 0.2");
    if (i > 0 && !(u_grid[i] > u_grid[i - 1]))
      fail(ErrorKind::InvalidInput, "U grid must be strictly increasing");
  }

  std::vector<OccupationProbabilities> probs;
  probs.reserve(u_grid.size());
  for (double u : u_grid) probs.push_back(probs_from_density(density, double_occupancy(density, u)));

  MonotoneOrder result;
  result.violations = static_cast<int>(u_grid.size());
  for (int order = 1; order <= kMaxExpansionOrder; ++order) {
    int violations = 0;
    double previous = taylor_entropy(probs.front(), order);
    for (std::size_t k = 1; k < probs.size(); ++k) {
      const double current = taylor_entropy(probs[k], order);
      if (current > previous) ++violations;
      previous = current;
    }
    if (violations < result.violations) {
      result.violations = violations;
      result.best_order = order;
    }
    if (violations == 0) {
      result.order = order;
      return result;
    }
  }
  return result;
}

}  // namespace hubent

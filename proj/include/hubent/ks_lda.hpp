#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hubent/chain_model.hpp"

namespace hubent {

/// Half-width of the interval around n = 1 over which v_xc crosses the Mott
/// discontinuity smoothly.
inline constexpr double kMottWindow = 0.05;
inline constexpr double kXcStep = 1e-4;

/// e_xc(n,U) = e0(n,U) - e0(n,0) - U n^2 / 4.
double xc_energy(double density, double interaction);

/// One-sided derivative of e_xc at `density` (side < 0: from below, > 0: from above).
double xc_potential_one_sided(double density, double interaction, int side);

/// v_xc = d e_xc / dn by central difference; one-sided at n in {0, 2}.
/// Inside |n - 1| < mott_window the derivatives of the two branches, each
/// continued across n = 1, are blended by a smoothstep; at n = 1 this is the
/// average of the one-sided limits. v_xc(n, 0) = 0.
double xc_potential(double density, double interaction, double mott_window = kMottWindow);

// Newton iterates with the exact Kohn-Sham density response at fixed N and a
// backtracking line search; Linear is plain density mixing with `mixing`.
enum class ScfSolver { Newton, Linear };

struct ScfConfig {
  ScfSolver solver = ScfSolver::Newton;
  double mixing = 0.3;          // linear weight in (0, 1]
  double tolerance = 1e-8;      // max |n_out - n_in|
  int max_iterations = 5000;    // Kohn-Sham evaluations, line-search trials included
  double smearing = 0.01;       // Fermi-Dirac kT; 0 = aufbau with degenerate sharing (Linear only)
  double mott_window = kMottWindow;
};

void validate(const ScfConfig& cfg);

struct ScfResult {
  DensityProfile profile;
  int iterations = 0;
  std::vector<double> residuals;      // max |n_out - n_in| per accepted iterate
  double max_number_error = 0.0;      // max |sum n - N| over all iterates
  double chemical_potential = 0.0;
};

/// Kohn-Sham self-consistent density of a spin-balanced chain with the
/// potential V_i + U n_i / 2 + v_xc(n_i, U).
ScfResult solve_scf(const ChainSpec& spec, const ScfConfig& cfg = {},
                    std::optional<std::vector<double>> initial = std::nullopt);

/// One Kohn-Sham map n_in -> n_out (exposed for fixed-point checks).
std::vector<double> kohn_sham_density(const ChainSpec& spec, std::span<const double> density_in,
                                      const ScfConfig& cfg, double* chemical_potential = nullptr);

struct EntropyReport {
  double von_neumann = 0.0;  // site average
  double linear = 0.0;
  std::vector<double> per_site_von_neumann;
  std::vector<double> per_site_linear;
  std::optional<double> von_neumann_std;  // ensemble only
  std::optional<double> linear_std;
  std::size_t samples = 1;
};

/// Site averages of the homogeneous entropy functionals evaluated at each n_i.
EntropyReport lda_entropies(const DensityProfile& profile, double interaction);

struct DisorderEnsemble {
  std::size_t sites = 100;
  std::size_t particles = 40;  // total N, even
  double interaction = 1.0;
  double concentration = 0.4;
  double strength = -1.0;
  std::size_t samples = 100;
  std::uint64_t master_seed = 0;
};

/// Sample s uses seed master_seed ^ s. Means and standard deviations are
/// accumulated in sample order. An SCF failure aborts with the sample index
/// and seed.
EntropyReport disorder_ensemble(const DisorderEnsemble& e, const ScfConfig& cfg = {},
                                unsigned workers = 1);

}  // namespace hubent

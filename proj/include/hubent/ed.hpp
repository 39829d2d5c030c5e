#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hubent/chain_model.hpp"
#include "hubent/entropy.hpp"

namespace hubent {

// Fixed-(N_up, N_down) Fock basis of an open chain. States are pairs of
// occupation bit masks (bit i = site i+1); each spin sector lists its masks
// in increasing numeric order and the full index is up_index * dim_down +
// down_index.
class FockBasis {
 public:
  FockBasis(std::size_t sites, std::size_t n_up, std::size_t n_down);

  std::size_t sites() const noexcept { return sites_; }
  std::size_t n_up() const noexcept { return n_up_; }
  std::size_t n_down() const noexcept { return n_down_; }
  std::size_t dimension() const noexcept { return up_.size() * down_.size(); }
  std::size_t up_dimension() const noexcept { return up_.size(); }
  std::size_t down_dimension() const noexcept { return down_.size(); }

  std::span<const std::uint64_t> up_masks() const noexcept { return up_; }
  std::span<const std::uint64_t> down_masks() const noexcept { return down_; }

  std::uint64_t up_mask(std::size_t index) const { return up_[index / down_.size()]; }
  std::uint64_t down_mask(std::size_t index) const { return down_[index % down_.size()]; }

  /// Rank of a mask within its spin sector (combinatorial number system).
  std::size_t rank(std::uint64_t mask) const;
  std::size_t index(std::uint64_t up, std::uint64_t down) const {
    return rank(up) * down_.size() + rank(down);
  }

  /// C(L, N_up) * C(L, N_down) without building the basis.
  static double dimension_of(std::size_t sites, std::size_t n_up, std::size_t n_down);

 private:
  std::size_t sites_;
  std::size_t n_up_;
  std::size_t n_down_;
  std::vector<std::uint64_t> up_;
  std::vector<std::uint64_t> down_;
  std::vector<std::vector<std::uint64_t>> binomial_;
};

// Mode ordering used for fermionic signs. SpinMajor puts every up mode before
// every down mode; SiteMajor interleaves (1up, 1down, 2up, ...).
enum class ModeOrdering { SpinMajor, SiteMajor };

/// out = H v, matrix-free, with t = 1 and spin-major ordering. Rows may be
/// split across `workers` threads; each output entry is written by one thread,
/// so the result is identical for every worker count.
void apply_hamiltonian(const ChainSpec& spec, const FockBasis& basis, std::span<const double> v,
                       std::span<double> out, unsigned workers = 1);

/// Dense H for small bases (oracle and cross-checks).
Eigen::MatrixXd dense_hamiltonian(const ChainSpec& spec, const FockBasis& basis,
                                  ModeOrdering ordering = ModeOrdering::SpinMajor);

enum class EigenMethod { Auto, Lanczos, Dense };

struct EdOptions {
  EigenMethod method = EigenMethod::Auto;
  std::size_t dimension_cap = 2'000'000;
  std::size_t dense_threshold = 2000;  // Auto uses the dense solver up to here
  std::size_t krylov_size = 60;        // vectors kept per Lanczos restart cycle
  int max_restarts = 200;
  double residual_tolerance = 1e-9;    // ||H x - E x|| at convergence
  unsigned workers = 1;
};

struct GroundState {
  double energy = 0.0;
  std::vector<double> amplitudes;  // unit norm
  double gap = -1.0;               // E1 - E0 when computed densely, else -1
  int matvecs = 0;
};

/// Lowest eigenpair of the chain Hamiltonian. Throws Capacity when the basis
/// exceeds options.dimension_cap.
GroundState ground_state(const ChainSpec& spec, const EdOptions& options = {});

OccupationProbabilities site_probabilities(const GroundState& gs, const FockBasis& basis,
                                           std::size_t site);

/// n_i = w_up + w_down + 2 w_double for every site.
DensityProfile density_profile(const GroundState& gs, const FockBasis& basis);

}  // namespace hubent

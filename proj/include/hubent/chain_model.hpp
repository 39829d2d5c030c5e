#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace hubent {

// External potential profiles. Site energies are in units of the hopping t.
struct Homogeneous {};

struct Disorder {
  double concentration = 0.0;  // fraction of sites carrying the impurity, in [0,1]
  double strength = 0.0;
  std::uint64_t seed = 0;
};

// X impurity sites of strength V followed by Y clean sites, anchored at site 1.
struct Superlattice {
  int impurity_sites = 1;
  int clean_sites = 1;
  double strength = 0.0;
};

using PotentialSpec = std::variant<Homogeneous, Disorder, Superlattice>;

void validate(const PotentialSpec& spec);

/// Number of impurities for concentration `c` on `sites` sites (round half up).
std::size_t impurity_count(double c, std::size_t sites);

/// Site-energy vector for `spec` on an open chain of `sites` sites.
///
/// Disorder places exactly impurity_count() impurities on distinct sites
/// drawn by a partial Fisher-Yates shuffle driven by mt19937_64(seed), so a
/// seed pins the configuration independently of the standard library.
std::vector<double> build_potential(const PotentialSpec& spec, std::size_t sites);

// Spin-balanced open Hubbard chain, t = 1.
class ChainSpec {
 public:
  // `particles_per_spin` electrons of each spin; potential defaults to zero.
  ChainSpec(std::size_t sites, std::size_t particles_per_spin, double interaction,
            std::vector<double> potential = {});

  static ChainSpec with_potential(std::size_t sites, std::size_t particles_per_spin,
                                  double interaction, const PotentialSpec& potential);

  std::size_t sites() const noexcept { return potential_.size(); }
  std::size_t n_up() const noexcept { return n_per_spin_; }
  std::size_t n_down() const noexcept { return n_per_spin_; }
  std::size_t particles() const noexcept { return 2 * n_per_spin_; }
  double filling() const noexcept {
    return static_cast<double>(particles()) / static_cast<double>(sites());
  }
  double interaction() const noexcept { return interaction_; }
  std::span<const double> potential() const noexcept { return potential_; }

 private:
  std::size_t n_per_spin_;
  double interaction_;
  std::vector<double> potential_;
};

enum class DensitySource { Scf, Exact };

// Site densities n_i in [0, 2].
struct DensityProfile {
  std::vector<double> density;
  DensitySource source = DensitySource::Scf;

  double total() const noexcept;
};

}  // namespace hubent

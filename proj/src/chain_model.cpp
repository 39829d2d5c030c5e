#include "hubent/chain_model.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "hubent/errors.hpp"

namespace hubent {

namespace {

// Unbiased draw in [0, bound) by rejection; std::uniform_int_distribution is
// implementation-defined and would tie configurations to one standard library.
std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

struct Validator {
  void operator()(const Homogeneous&) const {}
  void operator()(const Disorder& d) const {
    if (!(d.concentration >= 0.0 && d.concentration <= 1.0))
      fail(ErrorKind::InvalidSpec,
           "disorder concentration must lie in [0,1], got " + std::to_string(d.concentration));
    if (!std::isfinite(d.strength)) fail(ErrorKind::InvalidSpec, "disorder strength must be finite");
  }
  void operator()(const Superlattice& s) const {
    if (s.impurity_sites < 1 || s.clean_sites < 1)
      fail(ErrorKind::InvalidSpec, "superlattice block lengths X and Y must be >= 1");
    if (!std::isfinite(s.strength)) fail(ErrorKind::InvalidSpec, "superlattice strength must be finite");
  }
};

}  // namespace

void validate(const PotentialSpec& spec) { std::visit(Validator{}, spec); }

std::size_t impurity_count(double c, std::size_t sites) {
  if (!(c >= 0.0 && c <= 1.0))
    fail(ErrorKind::InvalidSpec, "concentration must lie in [0,1], got " + std::to_string(c));
  const auto count = static_cast<std::size_t>(std::floor(c * static_cast<double>(sites) + 0.5));
  return std::min(count, sites);
}

std::vector<double> build_potential(const PotentialSpec& spec, std::size_t sites) {
  if (sites == 0) fail(ErrorKind::InvalidSpec, "chain must have at least one site");
  validate(spec);
  std::vector<double> v(sites, 0.0);

  if (const auto* d = std::get_if<Disorder>(&spec)) {
    const std::size_t k = impurity_count(d->concentration, sites);
    std::vector<std::size_t> idx(sites);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::mt19937_64 rng(d->seed);
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + bounded_draw(rng, sites - i);
      std::swap(idx[i], idx[j]);
      v[idx[i]] = d->strength;
    }
  } else if (const auto* s = std::get_if<Superlattice>(&spec)) {
    const auto period = static_cast<std::size_t>(s->impurity_sites + s->clean_sites);
    for (std::size_t i = 0; i < sites; ++i)
      if (i % period < static_cast<std::size_t>(s->impurity_sites)) v[i] = s->strength;
  }
  return v;
}

ChainSpec::ChainSpec(std::size_t sites, std::size_t particles_per_spin, double interaction,
                     std::vector<double> potential)
    : n_per_spin_(particles_per_spin), interaction_(interaction), potential_(std::move(potential)) {
  if (sites == 0) fail(ErrorKind::InvalidSpec, "chain must have at least one site");
  if (potential_.empty()) potential_.assign(sites, 0.0);
  if (potential_.size() != sites)
    fail(ErrorKind::InvalidSpec, "potential has " + std::to_string(potential_.size()) +
                                     " entries for " + std::to_string(sites) + " sites");
  if (particles_per_spin > sites)
    fail(ErrorKind::InvalidSpec, "particles per spin exceed the number of sites");
  if (!(interaction >= 0.0) || !std::isfinite(interaction))
    fail(ErrorKind::InvalidSpec, "interaction U must be finite and >= 0");
  for (double x : potential_)
    if (!std::isfinite(x)) fail(ErrorKind::InvalidSpec, "potential entries must be finite");
}

ChainSpec ChainSpec::with_potential(std::size_t sites, std::size_t particles_per_spin,
                                    double interaction, const PotentialSpec& potential) {
  return ChainSpec(sites, particles_per_spin, interaction, build_potential(potential, sites));
}

double DensityProfile::total() const noexcept {
  return std::accumulate(density.begin(), density.end(), 0.0);
}

}  // namespace hubent

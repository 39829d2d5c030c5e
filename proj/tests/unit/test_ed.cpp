#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>

#include "hubent/ed.hpp"
#include "hubent/entropy.hpp"
#include "hubent/errors.hpp"

using namespace hubent;
using std::numbers::pi;

namespace {

// Sum of the lowest single-particle levels -2 cos(pi k / (L+1)), both spins.
double free_fermion_energy(std::size_t sites, std::size_t per_spin) {
  std::vector<double> levels;
  for (std::size_t k = 1; k <= sites; ++k) levels.push_back(-2.0 * std::cos(pi * k / (sites + 1.0)));
  std::ranges::sort(levels);
  double e = 0.0;
  for (std::size_t k = 0; k < per_spin; ++k) e += 2.0 * levels[k];
  return e;
}

GroundState solve(const ChainSpec& spec, EigenMethod method) {
  EdOptions opt;
  opt.method = method;
  return ground_state(spec, opt);
}

double site_averaged_entropy(const ChainSpec& spec) {
  const FockBasis basis(spec.sites(), spec.n_up(), spec.n_down());
  const auto gs = ground_state(spec);
  double s = 0.0;
  for (std::size_t i = 0; i < spec.sites(); ++i) s += von_neumann(site_probabilities(gs, basis, i));
  return s / spec.sites();
}

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  std::vector<double> v(n);
  for (double& x : v) x = g(rng);
  return v;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

TEST_CASE("Fock basis enumeration") {
  const FockBasis basis(6, 2, 3);
  CHECK(basis.dimension() == 15 * 20);
  CHECK(FockBasis::dimension_of(6, 2, 3) == 300.0);
  CHECK(FockBasis::dimension_of(16, 8, 8) == 12870.0 * 12870.0);
  for (std::size_t k = 0; k < basis.dimension(); ++k) {
    CHECK(std::popcount(basis.up_mask(k)) == 2);
    CHECK(std::popcount(basis.down_mask(k)) == 3);
    CHECK(basis.index(basis.up_mask(k), basis.down_mask(k)) == k);
  }
  const auto up = basis.up_masks();
  CHECK(std::ranges::is_sorted(up));
  CHECK(std::adjacent_find(up.begin(), up.end()) == up.end());
}

TEST_CASE("dimer spectrum") {
  const ChainSpec free(2, 1, 0.0);
  CHECK(solve(free, EigenMethod::Dense).energy == doctest::Approx(-2.0).epsilon(1e-14));

  for (double u : {0.5, 4.0, 100.0}) {
    const double exact = (u - std::sqrt(u * u + 16.0)) / 2.0;
    CHECK(solve(ChainSpec(2, 1, u), EigenMethod::Dense).energy == doctest::Approx(exact).epsilon(1e-13));
    CHECK(std::abs(solve(ChainSpec(2, 1, u), EigenMethod::Lanczos).energy - exact) < 1e-10);
  }

  const FockBasis basis(2, 1, 1);
  const auto gs0 = ground_state(free);
  for (std::size_t i = 0; i < 2; ++i) {
    const auto p = site_probabilities(gs0, basis, i);
    CHECK(p.up == doctest::Approx(0.25));
    CHECK(p.dbl == doctest::Approx(0.25));
    CHECK(von_neumann(p) == doctest::Approx(1.0));
  }
  const auto gs = ground_state(ChainSpec(2, 1, 100.0));
  const auto p = site_probabilities(gs, basis, 0);
  CHECK(p.dbl < 0.01);
  CHECK(std::abs(von_neumann(p) - 0.5) < 0.02);

  const auto n = density_profile(gs, basis);
  CHECK(n.source == DensitySource::Exact);
  CHECK(n.density[0] == doctest::Approx(1.0));
  CHECK(n.density[1] == doctest::Approx(1.0));
}

TEST_CASE("non-interacting energies equal free-fermion sums") {
  CHECK(free_fermion_energy(4, 2) ==
        doctest::Approx(2 * (-2 * std::cos(pi / 5) - 2 * std::cos(2 * pi / 5))));
  for (std::size_t sites = 2; sites <= 10; ++sites)
    for (std::size_t per_spin = 1; per_spin <= sites; ++per_spin) {
      if (FockBasis::dimension_of(sites, per_spin, per_spin) > 70000) continue;
      const ChainSpec spec(sites, per_spin, 0.0);
      CAPTURE(sites);
      CAPTURE(per_spin);
      CHECK(std::abs(solve(spec, EigenMethod::Lanczos).energy - free_fermion_energy(sites, per_spin)) < 1e-9);
    }
}

TEST_CASE("Lanczos agrees with dense diagonalization below the dense threshold") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> pot(-2.0, 2.0);
  int compared = 0;
  for (std::size_t sites = 2; sites <= 8; ++sites)
    for (std::size_t per_spin = 1; per_spin <= sites; ++per_spin) {
      if (FockBasis::dimension_of(sites, per_spin, per_spin) > 2000) continue;
      for (double u : {0.0, 1.0, 4.0, 8.0})
        for (bool with_potential : {false, true}) {
          std::vector<double> v(sites, 0.0);
          if (with_potential)
            for (double& x : v) x = pot(rng);
          const ChainSpec spec(sites, per_spin, u, v);
          const FockBasis basis(sites, per_spin, per_spin);
          const auto dense = solve(spec, EigenMethod::Dense);
          const auto lanczos = solve(spec, EigenMethod::Lanczos);
          CAPTURE(sites);
          CAPTURE(per_spin);
          CAPTURE(u);
          CHECK(std::abs(dense.energy - lanczos.energy) < 1e-10);
          ++compared;
          if (dense.gap <= 1e-8) continue;
          for (std::size_t i = 0; i < sites; ++i) {
            const auto a = site_probabilities(dense, basis, i).values();
            const auto b = site_probabilities(lanczos, basis, i).values();
            for (int k = 0; k < 4; ++k) CHECK(std::abs(a[k] - b[k]) < 1e-8);
          }
        }
    }
  CHECK(compared > 100);
}

TEST_CASE("Hamiltonian is symmetric and ordering-independent") {
  std::mt19937_64 rng(3);
  const ChainSpec spec(5, 2, 3.0, {0.3, -1.0, 0.0, 2.0, 0.5});
  const FockBasis basis(5, 2, 2);
  const std::size_t d = basis.dimension();
  for (int trial = 0; trial < 100; ++trial) {
    const auto u = random_vector(rng, d), v = random_vector(rng, d);
    std::vector<double> hu(d), hv(d);
    apply_hamiltonian(spec, basis, u, hu);
    apply_hamiltonian(spec, basis, v, hv);
    CHECK(std::abs(dot(u, hv) - dot(hu, v)) < 1e-12 * std::max(1.0, std::abs(dot(u, hv))));
  }

  const Eigen::MatrixXd a = dense_hamiltonian(spec, basis, ModeOrdering::SpinMajor);
  const Eigen::MatrixXd b = dense_hamiltonian(spec, basis, ModeOrdering::SiteMajor);
  CHECK((a - a.transpose()).cwiseAbs().maxCoeff() == 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ea(a, Eigen::EigenvaluesOnly), eb(b, Eigen::EigenvaluesOnly);
  CHECK((ea.eigenvalues() - eb.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12);

  // Matrix-free action equals the dense matrix.
  const auto v = random_vector(rng, d);
  std::vector<double> hv(d);
  apply_hamiltonian(spec, basis, v, hv);
  const Eigen::VectorXd ref = a * Eigen::Map<const Eigen::VectorXd>(v.data(), d);
  for (std::size_t k = 0; k < d; ++k) CHECK(std::abs(hv[k] - ref[k]) < 1e-12);
}

TEST_CASE("diagonal is interaction plus site energies") {
  const std::vector<double> pot{0.7, -1.3, 2.1, 0.0};
  const ChainSpec spec(4, 2, 5.0, pot);
  const FockBasis basis(4, 2, 2);
  const Eigen::MatrixXd h = dense_hamiltonian(spec, basis);
  for (std::size_t k = 0; k < basis.dimension(); ++k) {
    const auto up = basis.up_mask(k), dn = basis.down_mask(k);
    double expected = 5.0 * std::popcount(up & dn);
    for (int i = 0; i < 4; ++i) expected += pot[i] * (((up >> i) & 1) + ((dn >> i) & 1));
    CHECK(h(k, k) == doctest::Approx(expected).epsilon(1e-15));
  }
}

TEST_CASE("worker count does not change H v") {
  std::mt19937_64 rng(9);
  const ChainSpec spec(8, 3, 4.0, {0.1, 0.2, -0.3, 0.0, 1.0, 0.5, -0.5, 0.25});
  const FockBasis basis(8, 3, 3);
  const auto v = random_vector(rng, basis.dimension());
  std::vector<double> a(v.size()), b(v.size());
  apply_hamiltonian(spec, basis, v, a, 1);
  apply_hamiltonian(spec, basis, v, b, 3);
  CHECK(a == b);

  std::vector<double> wrong(v.size() - 1);
  CHECK_THROWS_AS(apply_hamiltonian(spec, basis, v, wrong), Error);
}

TEST_CASE("ground state is normalized and variational") {
  std::mt19937_64 rng(17);
  const ChainSpec spec(8, 3, 2.0);
  const FockBasis basis(8, 3, 3);
  EdOptions opt;
  opt.method = EigenMethod::Lanczos;
  const auto gs = ground_state(spec, opt);
  CHECK(std::abs(dot(gs.amplitudes, gs.amplitudes) - 1.0) < 1e-12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto v = random_vector(rng, basis.dimension());
    std::vector<double> hv(v.size());
    apply_hamiltonian(spec, basis, v, hv);
    CHECK(gs.energy <= dot(v, hv) / dot(v, v));
  }
}

TEST_CASE("energy is non-decreasing in U") {
  double previous = -1e300;
  for (double u : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
    const double e = ground_state(ChainSpec(6, 3, u)).energy;
    CHECK(e >= previous);
    previous = e;
  }
}

TEST_CASE("half-filled chain loses entanglement as U grows") {
  double previous = 2.0;
  for (double u : {0.0, 1.0, 2.0, 4.0, 8.0}) {
    const double s = site_averaged_entropy(ChainSpec(8, 4, u));
    CHECK(s < previous);
    previous = s;
  }
}

TEST_CASE("site observables") {
  const ChainSpec spec(7, 2, 3.0);
  const FockBasis basis(7, 2, 2);
  const auto gs = ground_state(spec);
  for (std::size_t i = 0; i < 7; ++i) {
    const auto p = site_probabilities(gs, basis, i).values();
    const auto q = site_probabilities(gs, basis, 6 - i).values();
    CHECK(std::abs(p[0] + p[1] + p[2] + p[3] - 1.0) < 1e-12);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(p[k] - q[k]) < 1e-10);
  }
  CHECK(density_profile(gs, basis).total() == doctest::Approx(4.0).epsilon(1e-12));

  // Repulsive impurity block depletes its sites.
  const auto sl = ChainSpec::with_potential(9, 3, 4.0, Superlattice{2, 7, 2.0});
  const FockBasis b9(9, 3, 3);
  const auto n = density_profile(ground_state(sl), b9).density;
  double clean = 0.0;
  for (std::size_t i = 2; i < 9; ++i) clean += n[i] / 7.0;
  CHECK(n[0] < clean);
  CHECK(n[1] < clean);
  CHECK(std::abs(n[0] + n[1] + 7.0 * clean - 6.0) < 1e-10);
}

TEST_CASE("capacity guard names the dimension") {
  try {
    ground_state(ChainSpec(16, 8, 4.0));
    FAIL("expected a capacity error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Capacity);
    CHECK(std::string(e.what()).find("165636900") != std::string::npos);
  }
  EdOptions opt;
  opt.dimension_cap = 100;
  CHECK_THROWS_AS(ground_state(ChainSpec(6, 3, 1.0), opt), Error);
}

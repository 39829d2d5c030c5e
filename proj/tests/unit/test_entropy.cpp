#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hubent/entropy.hpp"
#include "hubent/errors.hpp"
#include "hubent/experiments.hpp"

using namespace hubent;

namespace {

const double kLn4 = std::log(4.0);

// Uniform on the probability simplex, components bounded below by `floor`.
OccupationProbabilities random_probs(std::mt19937_64& rng, double floor = 0.0) {
  std::exponential_distribution<double> e(1.0);
  std::array<double, 4> w{};
  double sum = 0.0;
  for (double& x : w) sum += (x = e(rng));
  const double scale = 1.0 - 4.0 * floor;
  for (double& x : w) x = floor + scale * x / sum;
  return OccupationProbabilities::checked(w[0], w[1], w[2], w[3]);
}

// Independent of the library: Shannon entropy via log2, halved.
double shannon_bits_over_2(const OccupationProbabilities& p) {
  double s = 0.0;
  for (double w : p.values())
    if (w > 0) s -= w * std::log2(w);
  return s / 2.0;
}

}  // namespace

TEST_CASE("probabilities from density and double occupancy") {
  auto p = probs_from_density(1.0, 0.25);
  CHECK(p.up == doctest::Approx(0.25));
  CHECK(p.down == doctest::Approx(0.25));
  CHECK(p.dbl == doctest::Approx(0.25));
  CHECK(p.empty == doctest::Approx(0.25));

  p = probs_from_density(1.0, 0.0);
  CHECK(p.up == 0.5);
  CHECK(p.empty == 0.0);

  p = probs_from_density(0.4, 0.04);
  CHECK(p.up == doctest::Approx(0.16));
  CHECK(p.down == doctest::Approx(0.16));
  CHECK(p.dbl == doctest::Approx(0.04));
  CHECK(p.empty == doctest::Approx(0.64));
  CHECK(p.up + p.down + p.dbl + p.empty == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("tiny negatives clamp, real negatives raise") {
  const auto p = OccupationProbabilities::checked(0.5, 0.5, -5e-10, 5e-10);
  CHECK(p.dbl == 0.0);
  CHECK_THROWS_AS(OccupationProbabilities::checked(0.5, 0.5, -1e-5, 1e-5), Error);
  CHECK_THROWS_AS(OccupationProbabilities::checked(0.5, 0.5, 0.5, 0.0), Error);
  try {
    probs_from_density(0.4, 0.3);  // more double occupancy than density allows
    FAIL("expected a domain error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ProbabilityDomain);
  }
}

TEST_CASE("entropy values at reference vectors") {
  const OccupationProbabilities uniform{0.25, 0.25, 0.25, 0.25};
  const OccupationProbabilities pure{1, 0, 0, 0};
  const OccupationProbabilities mott{0.5, 0.5, 0, 0};

  CHECK(von_neumann(uniform) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(linear(uniform) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(von_neumann(pure) == 0.0);
  CHECK(linear(pure) == 0.0);
  CHECK(von_neumann(mott) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(linear(mott) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  for (int k = 0; k < 4; ++k) {
    std::array<double, 4> w{};
    w[k] = 1.0;
    const OccupationProbabilities unit{w[0], w[1], w[2], w[3]};
    CHECK(von_neumann(unit) == 0.0);
    CHECK(linear(unit) == 0.0);
  }
}

TEST_CASE("random vectors: bounds, permutation symmetry, concavity") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> lam(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = random_probs(rng);
    const double s = von_neumann(p);
    const double l = linear(p);
    CHECK(s >= 0.0);
    CHECK(s <= 1.0 + 1e-15);
    CHECK(l >= 0.0);
    CHECK(l <= 1.0 + 1e-15);
    CHECK(s == doctest::Approx(shannon_bits_over_2(p)).epsilon(1e-13));

    auto w = p.values();
    std::ranges::sort(w);
    do {
      const OccupationProbabilities q{w[0], w[1], w[2], w[3]};
      CHECK(std::abs(von_neumann(q) - s) < 1e-14);
      CHECK(std::abs(linear(q) - l) < 1e-14);
    } while (std::ranges::next_permutation(w).found);

    const auto q = random_probs(rng);
    const double t = lam(rng);
    const OccupationProbabilities mix{t * p.up + (1 - t) * q.up, t * p.down + (1 - t) * q.down,
                                      t * p.dbl + (1 - t) * q.dbl, t * p.empty + (1 - t) * q.empty};
    CHECK(von_neumann(mix) >= t * s + (1 - t) * von_neumann(q) - 1e-12);
  }
}

TEST_CASE("first-order expansion is proportional to the linear entropy") {
  std::mt19937_64 rng(7);
  const double factor = 3.0 / (4.0 * kLn4);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = random_probs(rng);
    CHECK(std::abs(taylor_entropy(p, 1) - factor * linear(p)) < 1e-12);
  }
  CHECK(taylor_entropy({0.25, 0.25, 0.25, 0.25}, 1) == doctest::Approx(factor));
  CHECK(factor == doctest::Approx(0.5410).epsilon(1e-4));
}

TEST_CASE("expansion converges to the von Neumann entropy") {
  for (int order : {1, 5, 50, 200}) CHECK(taylor_entropy({1, 0, 0, 0}, order) == 0.0);

  const OccupationProbabilities p{0.16, 0.16, 0.04, 0.64};
  CHECK(std::abs(taylor_entropy(p, 200) - von_neumann(p)) < 1e-6);

  // Interior vectors (all components >= 0.05) converge to 1e-8 by order 400.
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const auto q = random_probs(rng, 0.05);
    CHECK(std::abs(taylor_entropy(q, 400) - von_neumann(q)) < 1e-8);
  }

  // Closer to the simplex boundary the remainder obeys
  // sum_k (1 - w_k)^(l+1) / ((l+1) ln 4), which is not below 1e-8 at l = 400.
  for (int trial = 0; trial < 500; ++trial) {
    const auto q = random_probs(rng, 1e-3);
    double bound = 0.0;
    for (double w : q.values()) bound += std::pow(1.0 - w, 401) / (401 * kLn4);
    const double err = von_neumann(q) - taylor_entropy(q, 400);
    CHECK(err >= -1e-14);
    CHECK(err <= bound + 1e-14);
  }
}

TEST_CASE("accuracy of partial sums improves with the order") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = random_probs(rng);
    double previous = 1e300;
    for (int order = 1; order <= 60; ++order) {
      const double err = std::abs(taylor_entropy(p, order) - von_neumann(p));
      CHECK(err <= previous + 1e-15);
      previous = err;
    }
  }
}

TEST_CASE("order zero is rejected") {
  try {
    taylor_entropy({0.25, 0.25, 0.25, 0.25}, 0);
    FAIL("expected an order error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidOrder);
  }
}

TEST_CASE("minimal monotone order along the default U grid") {
  const auto grid = make_grid(0.2, 10.0, 0.2);
  REQUIRE(grid.size() == 50);

  const auto half = minimal_monotone_order(1.0, grid);
  REQUIRE(half.order);
  CHECK(*half.order == 1);

  const auto mid = minimal_monotone_order(0.5, grid);
  REQUIRE(mid.order);
  CHECK(*mid.order == 6);

  const auto low = minimal_monotone_order(0.2, grid);
  REQUIRE(low.order);
  CHECK(*low.order == 25);

  CHECK_THROWS_AS(minimal_monotone_order(0.5, std::vector<double>{0.1, 1.0}), Error);
  CHECK_THROWS_AS(minimal_monotone_order(0.5, std::vector<double>{1.0, 0.5}), Error);
  CHECK_THROWS_AS(minimal_monotone_order(1.5, grid), Error);
}

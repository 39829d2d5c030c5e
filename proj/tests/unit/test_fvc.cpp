#include <doctest.h>

#include <cmath>
#include <numbers>
#include <thread>

#include "hubent/entropy.hpp"
#include "hubent/errors.hpp"
#include "hubent/experiments.hpp"
#include "hubent/fvc.hpp"

using namespace hubent;
using std::numbers::pi;

namespace {

// Composite Simpson on [0, X] with the standard-library Bessel functions,
// X chosen so the Fermi weight has decayed to e^-40.
double simpson_rhs(double u) {
  const double x_max = 80.0 / u;
  const int n = 2 * static_cast<int>(std::ceil(x_max / 2e-3 / 2));
  const double h = x_max / n;
  auto f = [u](double x) {
    const double ratio = x == 0.0 ? 0.5 : std::cyl_bessel_j(1.0, x) / x;
    return std::cyl_bessel_j(0.0, x) * ratio / (1.0 + std::exp(u * x / 2));
  };
  double s = f(0.0) + f(x_max);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return -4.0 * s * h / 3.0;
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidInput;
}

std::vector<double> log_grid(double lo, double hi, int points) {
  std::vector<double> out;
  for (int i = 0; i < points; ++i) out.push_back(lo * std::pow(hi / lo, double(i) / (points - 1)));
  return out;
}

}  // namespace

TEST_CASE("Bessel functions match the standard library") {
  for (double x = 0.0; x <= 120.0; x += 0.0137) {
    CHECK(std::abs(bessel_j0(x) - std::cyl_bessel_j(0.0, x)) < 1e-12);
    CHECK(std::abs(bessel_j1(x) - std::cyl_bessel_j(1.0, x)) < 1e-12);
  }
  for (double x : {250.0, 1000.5, 12345.6}) {
    CHECK(std::abs(bessel_j0(x) - std::cyl_bessel_j(0.0, x)) < 1e-12);
    CHECK(std::abs(bessel_j1(x) - std::cyl_bessel_j(1.0, x)) < 1e-12);
  }
}

TEST_CASE("Lieb-Wu integral against an independent quadrature") {
  for (double u : {0.2, 1.0, 4.0, 10.0}) {
    CAPTURE(u);
    CHECK(std::abs(lieb_wu_rhs(u) - simpson_rhs(u)) < 1e-10);
  }
  // Frozen after the comparison above.
  CHECK(lieb_wu_rhs(1.0) == doctest::Approx(-1.040368653394436).epsilon(1e-13));
  CHECK(lieb_wu_rhs(4.0) == doctest::Approx(-0.573729367898445).epsilon(1e-13));
  CHECK(lieb_wu_rhs(0.2) == doctest::Approx(-1.223918234773146).epsilon(1e-13));
}

TEST_CASE("Lieb-Wu integral limits and monotonicity") {
  CHECK(std::abs(lieb_wu_rhs(0.0) + 4.0 / pi) < 1e-10);
  // At large U only the x -> 0 region survives: -4 ln 2 / U.
  const double big = lieb_wu_rhs(1e6);
  CHECK(std::abs(big) < 1e-5);
  CHECK(big == doctest::Approx(-4.0 * std::log(2.0) / 1e6).epsilon(1e-5));

  CHECK(lieb_wu_rhs(3.9) < lieb_wu_rhs(4.0));
  CHECK(lieb_wu_rhs(4.0) < lieb_wu_rhs(4.1));
  double previous = lieb_wu_rhs(0.0);
  for (double u : log_grid(0.05, 1e4, 40)) {
    const double r = lieb_wu_rhs(u);
    CHECK(r > previous);
    CHECK(r < 0.0);
    previous = r;
  }
  CHECK(lieb_wu_integral(4.0).error_estimate < 1e-10);
}

TEST_CASE("b(U) solves the half-filling condition") {
  CHECK(lieb_wu_lhs(2.0) == doctest::Approx(-4.0 / pi).epsilon(1e-15));
  CHECK(lieb_wu_lhs(1.0) == doctest::Approx(0.0));
  CHECK(std::abs(solve_b(0.0) - 2.0) < 1e-9);
  CHECK(solve_b(1e6) > 1.0);
  CHECK(solve_b(1e6) < 1.001);
  CHECK(solve_b(1.0) == doctest::Approx(1.699389477915483).epsilon(1e-12));

  double previous = 2.0;
  for (double u : log_grid(0.05, 1e4, 60)) {
    const double b = solve_b(u);
    CAPTURE(u);
    CHECK(std::abs(lieb_wu_lhs(b) - lieb_wu_rhs(u)) < 1e-12);
    CHECK(b >= 1.0);
    CHECK(b <= previous);
    previous = b;
  }
}

TEST_CASE("cached b is identical to a fresh solve from any thread") {
  const std::vector<double> us{0.2, 0.7, 1.3, 4.0, 9.9};
  std::vector<std::vector<double>> seen(4, std::vector<double>(us.size()));
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < seen.size(); ++t)
    threads.emplace_back([&, t] {
      for (std::size_t i = 0; i < us.size(); ++i) seen[t][i] = cached_b(us[i]);
    });
  for (auto& th : threads) th.join();
  for (std::size_t i = 0; i < us.size(); ++i)
    for (const auto& row : seen) CHECK(row[i] == solve_b(us[i]));
}

TEST_CASE("energy: analytic limits") {
  for (int i = 0; i <= 49; ++i) {
    const double n = i / 49.0;
    CHECK(e0_fvc(n, 0.0) == -(4.0 / pi) * std::sin(pi * n / 2.0));
    CHECK(std::abs(e0_fvc(n, 1e4) + (2.0 / pi) * std::sin(pi * n)) < 1e-3);
    // Across the excluded (0, 0.05) window the energy moves by at most the
    // half-filling shift U/4 plus the U^(1/3) overshoot of alpha, about 4e-4.
    const double jump = e0_fvc(n, 0.05) - e0_fvc(n, 0.0);
    CHECK(jump >= 0.0);
    CHECK(jump < 0.05 / 4 + 5e-4);
  }
  CHECK(e0_fvc(0.5, 0.0) == doctest::Approx(-0.9003).epsilon(1e-4));
}

TEST_CASE("energy: half filling and particle-hole identity") {
  for (double u : {0.2, 1.0, 4.0, 8.0})
    CHECK(e0_fvc(1.0, u) == doctest::Approx(lieb_wu_rhs(u)).epsilon(1e-12));
  CHECK(e0_fvc(1.5, 4.0) == doctest::Approx(e0_fvc(0.5, 4.0) + 2.0).epsilon(1e-14));
  const auto ev = evaluate_fvc(0.5, 4.0);
  CHECK(ev.alpha == doctest::Approx(std::pow(0.5, std::cbrt(4.0) / 8.0)));
  CHECK(ev.beta == doctest::Approx(std::pow(ev.b, ev.alpha)));
  for (double n = 0.0; n <= 1.0; n += 0.05) CHECK(e0_fvc(n, 3.0) <= 0.0);
  // The lower branch coincides with e0 up to half filling.
  CHECK(e0_lower_branch(0.7, 4.0) == doctest::Approx(e0_fvc(0.7, 4.0)).epsilon(1e-15));
}

TEST_CASE("energy: unsupported regimes") {
  CHECK(kind_of([] { e0_fvc(0.5, 0.01); }) == ErrorKind::UnsupportedRegime);
  CHECK(kind_of([] { e0_fvc(2.5, 1.0); }) == ErrorKind::InvalidInput);
  CHECK(kind_of([] { e0_fvc(0.5, -1.0); }) == ErrorKind::InvalidInput);
  CHECK(kind_of([] { double_occupancy(0.5, 0.1); }) == ErrorKind::UnsupportedRegime);
  CHECK_NOTHROW(e0_fvc(0.5, 0.05));
}

TEST_CASE("double occupancy") {
  CHECK(std::abs(double_occupancy(1.0, 0.2) - 0.25) < 0.02);
  CHECK(double_occupancy(1.0, 20.0) < 0.02);

  const double a = double_occupancy(0.4, 0.2), b = double_occupancy(0.4, 2.0),
               c = double_occupancy(0.4, 6.0);
  // Small at low density for every U; the spread itself is about 0.021.
  CHECK(std::max({a, b, c}) < 0.03);
  CHECK(std::max({a, b, c}) - std::min({a, b, c}) < 0.025);

  // Brute-force derivative of the energy with a smaller step.
  for (double n : {0.3, 0.7, 1.0})
    for (double u : {0.5, 3.0, 7.0}) {
      const double h = 1e-4;
      const double fd = (e0_fvc(n, u + h) - e0_fvc(n, u - h)) / (2 * h);
      CHECK(double_occupancy(n, u) == doctest::Approx(fd).epsilon(1e-6));
    }

  for (double n = 0.05; n <= 1.0 + 1e-12; n += 0.05) {
    double previous = 1.0;
    for (double u : make_grid(0.2, 10.0, 0.2)) {
      const double w2 = double_occupancy(n, u);
      CHECK(w2 >= 0.0);
      CHECK(w2 <= n / 2 + 1e-12);
      CHECK(w2 < previous);
      previous = w2;
    }
  }
  CHECK(double_occupancy(1.3, 4.0) == doctest::Approx(double_occupancy(0.7, 4.0) + 0.3).epsilon(1e-10));
}

TEST_CASE("homogeneous entropies") {
  const auto weak = homogeneous_entropies(1.0, 0.2);
  CHECK(weak.von_neumann > 0.98);
  CHECK(weak.linear > 0.98);

  for (double n = 0.05; n < 1.0; n += 0.05)
    for (double u : {0.2, 1.0, 4.0, 8.0}) {
      const auto lo = homogeneous_entropies(n, u);
      const auto hi = homogeneous_entropies(2.0 - n, u);
      CHECK(std::abs(lo.von_neumann - hi.von_neumann) < 1e-12);
      CHECK(std::abs(lo.linear - hi.linear) < 1e-12);
      CHECK(lo.von_neumann >= 0.0);
      CHECK(lo.von_neumann <= 1.0);
      CHECK(lo.linear >= 0.0);
      CHECK(lo.linear <= 1.0);
    }

  const auto a = homogeneous_entropies(1.2, 4.0), b = homogeneous_entropies(0.8, 4.0);
  CHECK(std::abs(a.von_neumann - b.von_neumann) < 1e-12);

  // Low density: S falls with U while L rises.
  double s_prev = 2.0, l_prev = -1.0;
  for (double u : make_grid(0.2, 10.0, 0.2)) {
    const auto h = homogeneous_entropies(0.2, u);
    CHECK(h.von_neumann < s_prev);
    CHECK(h.linear > l_prev);
    s_prev = h.von_neumann;
    l_prev = h.linear;
  }

  // At n = 0.5 the linear entropy moves less with U than S does.
  double s_min = 2, s_max = -1, l_min = 2, l_max = -1;
  for (double u = 1.0; u <= 8.0; u += 1.0) {
    const auto h = homogeneous_entropies(0.5, u);
    s_min = std::min(s_min, h.von_neumann);
    s_max = std::max(s_max, h.von_neumann);
    l_min = std::min(l_min, h.linear);
    l_max = std::max(l_max, h.linear);
  }
  CHECK(l_max - l_min < s_max - s_min);
}

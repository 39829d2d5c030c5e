#include <cmath>
#include <numbers>

#include "hubent/fvc.hpp"

namespace hubent {

namespace {

struct J01 {
  double j0;
  double j1;
};

J01 series(double x) {
  const double q = -0.25 * x * x;
  double t0 = 1.0, t1 = 0.5 * x;
  double j0 = t0, j1 = t1;
  for (int k = 1; k < 30; ++k) {
    t0 *= q / (k * k);
    t1 *= q / (k * (k + 1.0));
    j0 += t0;
    j1 += t1;
    if (std::abs(t0) < 1e-18 && std::abs(t1) < 1e-18) break;
  }
  return {j0, j1};
}

// Miller's backward recurrence normalized by J0 + 2 sum_k J_2k = 1.
J01 backward_recurrence(double x) {
  const int start = 2 * static_cast<int>((x + 40.0) / 2.0);
  const double two_over_x = 2.0 / x;
  double above = 0.0;    // J_{n+1}
  double current = 1e-30;  // J_n
  double norm = 2.0 * current;
  double j1 = 0.0;
  for (int n = start; n >= 1; --n) {
    const double below = n * two_over_x * current - above;
    above = current;
    current = below;
    const int k = n - 1;
    if (k == 1) j1 = current;
    if (k >= 2 && k % 2 == 0) norm += 2.0 * current;
    if (std::abs(current) > 1e250) {
      current *= 1e-250;
      above *= 1e-250;
      norm *= 1e-250;
      j1 *= 1e-250;
    }
  }
  norm += current;
  return {current / norm, j1 / norm};
}

// Hankel expansion, truncated at the smallest term.
double asymptotic(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0, q = 0.0;
  double term = 1.0;
  double last = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * 8.0 * x);
    if (std::abs(term) > last) break;
    last = std::abs(term);
    switch (k % 4) {
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
      case 0: p += term; break;
    }
    if (last < 1e-17) break;
  }
  const double chi = x - (0.5 * nu + 0.25) * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

J01 evaluate(double x) {
  const double ax = std::abs(x);
  J01 r;
  if (ax < 1.0)
    r = series(ax);
  else if (ax < 20.0)
    r = backward_recurrence(ax);
  else
    r = {asymptotic(0.0, ax), asymptotic(1.0, ax)};
  if (x < 0.0) r.j1 = -r.j1;
  return r;
}

}  // namespace

double bessel_j0(double x) { return evaluate(x).j0; }
double bessel_j1(double x) { return evaluate(x).j1; }

}  // namespace hubent

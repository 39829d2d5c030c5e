#include "hubent/fvc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "hubent/errors.hpp"

namespace hubent {

namespace {

constexpr double kPi = std::numbers::pi;

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Estimate {
  double value;
  double error;
  double magnitude;  // integral of |f|, for the roundoff floor
};

template <class F>
Estimate gauss_kronrod(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double magnitude = std::abs(fc) * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double lo = f(center - dx), hi = f(center + dx);
    kronrod += kWgk[j] * (lo + hi);
    magnitude += kWgk[j] * (std::abs(lo) + std::abs(hi));
    if (j % 2 == 1) gauss += kWg[j / 2] * (lo + hi);
  }
  return {kronrod * half, std::abs((kronrod - gauss) * half), magnitude * std::abs(half)};
}

template <class F>
Estimate refine(const F& f, const Estimate& whole, double a, double b, double target, int depth,
                bool& ok) {
  const double floor = 50.0 * std::numeric_limits<double>::epsilon() * whole.magnitude;
  if (whole.error <= std::max(target, floor)) return whole;
  if (depth == 0) {
    ok = false;
    return whole;
  }
  const double mid = 0.5 * (a + b);
  const Estimate left = refine(f, gauss_kronrod(f, a, mid), a, mid, 0.5 * target, depth - 1, ok);
  const Estimate right = refine(f, gauss_kronrod(f, mid, b), mid, b, 0.5 * target, depth - 1, ok);
  return {left.value + right.value, left.error + right.error, left.magnitude + right.magnitude};
}

// Adaptive bisection with the target fixed once for the whole panel.
template <class F>
Estimate adaptive(const F& f, double a, double b, double tol, int depth, bool& ok) {
  const Estimate whole = gauss_kronrod(f, a, b);
  const double target = std::max(tol, 1e-13 * std::abs(whole.value));
  return refine(f, whole, a, b, target, depth, ok);
}

// Newton refinement of the k-th positive zero of J_nu (nu = 0 or 1) from
// McMahon's leading term.
double bessel_zero(int nu, int k) {
  double x = (k + (nu == 0 ? -0.25 : 0.25)) * kPi;
  for (int it = 0; it < 50; ++it) {
    double step;
    if (nu == 0) {
      step = bessel_j0(x) / -bessel_j1(x);
    } else {
      const double j1 = bessel_j1(x);
      step = j1 / (bessel_j0(x) - j1 / x);
    }
    x -= step;
    if (std::abs(step) < 1e-15 * x) break;
  }
  return x;
}

// Zeros of J0 J1 in increasing order: j0_1 < j1_1 < j0_2 < j1_2 < ...
double product_zero(int index) {
  const int k = index / 2 + 1;
  return bessel_zero(index % 2, k);
}

double j1_over_x(double x) {
  if (x < 1e-4) return 0.5 - x * x / 16.0;
  return bessel_j1(x) / x;
}

// 1 / (1 + exp(a)) without overflow.
double fermi_weight(double a) {
  if (a > 0.0) {
    const double e = std::exp(-a);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(a));
}

constexpr double kPanelTolerance = 1e-15;
constexpr double kTailTolerance = 1e-14;
constexpr int kMaxPanels = 200000;
constexpr int kMaxDepth = 50;

// Integral of J0 J1 / x over [0, inf). From the Hankel expansions the
// integrand is an alternating part plus a smooth part 1/(2 pi x^3) -
// 3/(16 pi x^5) + O(x^-7); the smooth tail is added analytically to each
// panel partial sum and the remaining alternating sequence is accelerated by
// repeated averaging.
LiebWuIntegral zero_interaction_integral() {
  const auto f = [](double x) { return bessel_j0(x) * j1_over_x(x); };
  constexpr int kPanels = 160;
  constexpr int kWindow = 40;
  std::vector<double> partial;
  partial.reserve(kPanels);
  double sum = 0.0, err = 0.0, a = 0.0;
  bool ok = true;
  for (int i = 0; i < kPanels; ++i) {
    const double b = product_zero(i);
    const Estimate e = adaptive(f, a, b, kPanelTolerance, kMaxDepth, ok);
    sum += e.value;
    err += e.error;
    const double b2 = b * b;
    partial.push_back(sum + 1.0 / (4.0 * kPi * b2) - 3.0 / (64.0 * kPi * b2 * b2));
    a = b;
  }
  const auto accelerate = [&](int end) {
    std::vector<double> t(partial.begin() + (end - kWindow), partial.begin() + end);
    for (int level = 1; level < kWindow; ++level)
      for (int j = 0; j + level < kWindow; ++j) t[j] = 0.5 * (t[j] + t[j + 1]);
    return t[0];
  };
  const double value = accelerate(kPanels);
  const double previous = accelerate(kPanels - 1);
  LiebWuIntegral r;
  r.value = -2.0 * value;  // -4 * (1/2) * integral
  r.error_estimate = 2.0 * (err + std::abs(value - previous));
  r.panels = kPanels;
  if (!ok || r.error_estimate > 1e-10)
    fail(ErrorKind::NumericalFailure,
         "Lieb-Wu quadrature at U=0 did not converge; error estimate " +
             std::to_string(r.error_estimate));
  return r;
}

}  // namespace

LiebWuIntegral lieb_wu_integral(double interaction) {
  if (!(interaction >= 0.0) || !std::isfinite(interaction))
    fail(ErrorKind::InvalidInput, "Lieb-Wu integral requires finite U >= 0");
  if (interaction == 0.0) return zero_interaction_integral();

  const double half_u = 0.5 * interaction;
  const auto f = [half_u](double x) {
    return bessel_j0(x) * j1_over_x(x) * fermi_weight(half_u * x);
  };
  // Beyond this point the weight is below exp(-40); splitting there lets the
  // quadrature resolve the weight's decay when U is large.
  const double cutoff = 80.0 / interaction;
  double sum = 0.0, err = 0.0, a = 0.0;
  bool ok = true;
  int panels = 0;
  for (int zero = 0;; ++panels) {
    if (panels >= kMaxPanels)
      fail(ErrorKind::NumericalFailure, "Lieb-Wu quadrature exceeded the panel limit");
    double b = product_zero(zero);
    if (cutoff > a && cutoff < b)
      b = cutoff;
    else
      ++zero;
    const Estimate e = adaptive(f, a, b, kPanelTolerance, kMaxDepth, ok);
    sum += e.value;
    err += e.error;
    a = b;
    // |J0 J1 / x| <= 1/2 everywhere and <= 1/x^2 for x >= 1, which bounds
    // the remaining tail by envelope(a) (2/U) exp(-U a / 2).
    const double envelope = a < 1.0 ? 0.5 : 1.0 / (a * a);
    const double tail = envelope * 2.0 / interaction * std::exp(-half_u * a);
    if (tail < kTailTolerance) {
      err += tail;
      break;
    }
  }
  LiebWuIntegral r;
  r.value = -4.0 * sum;
  r.error_estimate = 4.0 * err;
  r.panels = panels + 1;
  if (!ok || r.error_estimate > 1e-10)
    fail(ErrorKind::NumericalFailure, "Lieb-Wu quadrature at U=" + std::to_string(interaction) +
                                          " did not converge; error estimate " +
                                          std::to_string(r.error_estimate));
  return r;
}

double lieb_wu_lhs(double b) { return -(2.0 * b / kPi) * std::sin(kPi / b); }

double solve_b(double interaction) {
  const double rhs = lieb_wu_rhs(interaction);
  double lo = 1.0, hi = 2.0;
  const double f_lo = lieb_wu_lhs(lo) - rhs;
  const double f_hi = lieb_wu_lhs(hi) - rhs;
  // The U = 0 root sits on the bracket end; accept quadrature-level overshoot.
  if (std::abs(f_hi) < 1e-12) return hi;
  if (std::abs(f_lo) < 1e-15) return lo;
  if (f_lo * f_hi > 0.0)
    fail(ErrorKind::NumericalFailure,
         "b(U) bracket [1,2] does not contain a root for U=" + std::to_string(interaction) +
             " (rhs=" + std::to_string(rhs) + ")");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    // lhs is decreasing: positive residual means the root lies to the right.
    if (lieb_wu_lhs(mid) - rhs > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  const double b = 0.5 * (lo + hi);
  const double residual = std::abs(lieb_wu_lhs(b) - rhs);
  if (residual >= 1e-12)
    fail(ErrorKind::NumericalFailure, "b(U) residual " + std::to_string(residual) + " too large");
  return b;
}

double cached_b(double interaction) {
  static std::shared_mutex mutex;
  static std::unordered_map<double, double> cache;
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(interaction); it != cache.end()) return it->second;
  }
  const double b = solve_b(interaction);
  std::unique_lock lock(mutex);
  cache.emplace(interaction, b);
  return b;
}

namespace {

void check_regime(double density, double interaction) {
  if (!(density >= 0.0 && density <= 2.0))
    fail(ErrorKind::InvalidInput, "density " + std::to_string(density) + " outside [0,2]");
  if (!(interaction >= 0.0) || !std::isfinite(interaction))
    fail(ErrorKind::InvalidInput, "interaction must be finite and >= 0");
  if (interaction > 0.0 && interaction < kNumericalFloorU)
    fail(ErrorKind::UnsupportedRegime,
         "U=" + std::to_string(interaction) + " lies in the unsupported range (0, 0.05)");
}

}  // namespace

FvcEvaluation evaluate_fvc(double density, double interaction) {
  check_regime(density, interaction);
  const double n = density > 1.0 ? 2.0 - density : density;
  FvcEvaluation r;
  r.interaction = interaction;
  if (interaction == 0.0) {
    r.b = 2.0;
    r.alpha = 1.0;
    r.beta = 2.0;
    r.e0 = -(4.0 / kPi) * std::sin(kPi * n / 2.0);
  } else {
    r.b = cached_b(interaction);
    r.alpha = std::pow(n, std::cbrt(interaction) / 8.0);
    r.beta = std::pow(r.b, r.alpha);
    r.e0 = -(2.0 * r.beta / kPi) * std::sin(kPi * n / r.beta);
  }
  if (density > 1.0) r.e0 += interaction * (density - 1.0);
  return r;
}

double e0_fvc(double density, double interaction) { return evaluate_fvc(density, interaction).e0; }

double e0_lower_branch(double density, double interaction) {
  if (!(density > 0.0 && density < 2.0))
    fail(ErrorKind::InvalidInput, "branch density " + std::to_string(density) + " outside (0,2)");
  check_regime(std::min(density, 1.0), interaction);
  if (interaction == 0.0) return -(4.0 / kPi) * std::sin(kPi * density / 2.0);
  const double beta = std::pow(cached_b(interaction), std::pow(density, std::cbrt(interaction) / 8.0));
  return -(2.0 * beta / kPi) * std::sin(kPi * density / beta);
}

double double_occupancy(double density, double interaction) {
  if (!(density >= 0.0 && density <= 2.0))
    fail(ErrorKind::InvalidInput, "density " + std::to_string(density) + " outside [0,2]");
  if (!(interaction >= kDerivativeFloorU - 1e-12))
    fail(ErrorKind::UnsupportedRegime, "double occupancy requires U >= 0.2, got U=" +
                                           std::to_string(interaction));
  if (density > 1.0) return double_occupancy(2.0 - density, interaction) + (density - 1.0);
  const auto central = [&](double h) {
    return (e0_fvc(density, interaction + h) - e0_fvc(density, interaction - h)) / (2.0 * h);
  };
  const double coarse = central(kDerivativeStep);
  const double fine = central(0.5 * kDerivativeStep);
  return (4.0 * fine - coarse) / 3.0;
}

HomogeneousEntropies homogeneous_entropies(double density, double interaction) {
  HomogeneousEntropies r;
  r.double_occupancy = double_occupancy(density, interaction);
  r.probabilities = probs_from_density(density, r.double_occupancy);
  r.von_neumann = von_neumann(r.probabilities);
  r.linear = linear(r.probabilities);
  return r;
}

}  // namespace hubent

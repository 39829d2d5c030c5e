#include "hubent/ks_lda.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "hubent/errors.hpp"
#include "hubent/fvc.hpp"
#include "hubent/parallel.hpp"

namespace hubent {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kMinLineSearch = 1.0 / 64.0;
constexpr double kFallbackMixing = 0.05;
constexpr int kFallbackSteps = 100;
}  // namespace

double xc_energy(double density, double interaction) {
  return e0_fvc(density, interaction) - e0_fvc(density, 0.0) -
         interaction * density * density / 4.0;
}

double xc_potential_one_sided(double density, double interaction, int side) {
  if (interaction == 0.0) return 0.0;
  const double h = kXcStep;
  if (side < 0) {
    const double lo = std::max(0.0, density - h);
    return (xc_energy(density, interaction) - xc_energy(lo, interaction)) / (density - lo);
  }
  const double hi = std::min(2.0, density + h);
  return (xc_energy(hi, interaction) - xc_energy(density, interaction)) / (hi - density);
}

namespace {

double xc_derivative(double n, double u) {
  const double h = kXcStep;
  if (n - h < 0.0) return xc_potential_one_sided(n, u, +1);
  if (n + h > 2.0) return xc_potential_one_sided(n, u, -1);
  return (xc_energy(n + h, u) - xc_energy(n - h, u)) / (2.0 * h);
}

}  // namespace

double xc_potential(double density, double interaction, double mott_window) {
  if (interaction == 0.0) return 0.0;
  const double n = std::clamp(density, 0.0, 2.0);
  if (mott_window > 0.0 && std::abs(n - 1.0) < mott_window) {
    // Each side of the Mott point continued into the window, blended with a
    // smoothstep so v_xc stays C1 at the window edges.
    const double u = interaction;
    const auto base = [u](double m) { return -(4.0 / kPi) * std::sin(kPi * m / 2.0) + u * m * m / 4.0; };
    const auto lower = [&](double m) { return e0_lower_branch(m, u) - base(m); };
    const auto upper = [&](double m) { return e0_lower_branch(2.0 - m, u) + u * (m - 1.0) - base(m); };
    const double h = kXcStep;
    const double below = (lower(n + h) - lower(n - h)) / (2.0 * h);
    const double above = (upper(n + h) - upper(n - h)) / (2.0 * h);
    const double t = (n - (1.0 - mott_window)) / (2.0 * mott_window);
    const double s = t * t * (3.0 - 2.0 * t);
    return below + (above - below) * s;
  }
  return xc_derivative(n, interaction);
}

void validate(const ScfConfig& cfg) {
  if (!(cfg.mixing > 0.0 && cfg.mixing <= 1.0))
    fail(ErrorKind::InvalidInput, "SCF mixing must lie in (0, 1]");
  if (!(cfg.tolerance > 0.0)) fail(ErrorKind::InvalidInput, "SCF tolerance must be positive");
  if (cfg.max_iterations < 1) fail(ErrorKind::InvalidInput, "SCF needs at least one iteration");
  if (!(cfg.smearing >= 0.0)) fail(ErrorKind::InvalidInput, "smearing must be >= 0");
  if (cfg.solver == ScfSolver::Newton && cfg.smearing == 0.0)
    fail(ErrorKind::InvalidInput, "the Newton solver needs smearing > 0");
  if (!(cfg.mott_window >= 0.0 && cfg.mott_window < 1.0))
    fail(ErrorKind::InvalidInput, "Mott window must lie in [0, 1)");
}

namespace {

// Occupations per spin summing to `electrons`.
std::vector<double> occupations(const Eigen::VectorXd& energies, double electrons, double kt,
                                double& mu) {
  const auto count = static_cast<std::size_t>(energies.size());
  std::vector<double> f(count, 0.0);
  if (electrons <= 0.0) {
    mu = energies(0);
    return f;
  }
  if (kt == 0.0) {
    // Aufbau; a degenerate frontier shell shares its electrons equally.
    const auto filled = static_cast<std::size_t>(electrons);
    const double frontier = energies(static_cast<Eigen::Index>(filled - 1));
    std::size_t lo = filled - 1, hi = filled - 1;
    while (lo > 0 && std::abs(energies(static_cast<Eigen::Index>(lo - 1)) - frontier) < 1e-10) --lo;
    while (hi + 1 < count && std::abs(energies(static_cast<Eigen::Index>(hi + 1)) - frontier) < 1e-10) ++hi;
    for (std::size_t k = 0; k < lo; ++k) f[k] = 1.0;
    const double share = static_cast<double>(filled - lo) / static_cast<double>(hi - lo + 1);
    for (std::size_t k = lo; k <= hi; ++k) f[k] = share;
    mu = frontier;
    return f;
  }
  double lo = energies(0) - 50.0 * kt, hi = energies(energies.size() - 1) + 50.0 * kt;
  const auto fill = [&](double m) {
    double s = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
      const double x = (energies(static_cast<Eigen::Index>(k)) - m) / kt;
      f[k] = x > 0.0 ? std::exp(-x) / (1.0 + std::exp(-x)) : 1.0 / (1.0 + std::exp(x));
      s += f[k];
    }
    return s;
  };
  for (int it = 0; it < 200; ++it) {
    mu = 0.5 * (lo + hi);
    const double s = fill(mu);
    if (std::abs(s - electrons) < 1e-14 * electrons || mu == lo || mu == hi) break;
    (s > electrons ? hi : lo) = mu;
  }
  const double s = fill(mu);
  for (double& x : f) x *= electrons / s;
  return f;
}

std::string residual_summary(const std::vector<double>& residuals) {
  std::ostringstream os;
  os << "residuals";
  const std::size_t n = residuals.size();
  for (std::size_t k : {std::size_t{0}, n / 4, n / 2, 3 * n / 4, n - 1})
    if (k < n) os << " [" << k + 1 << "]=" << residuals[k];
  return os.str();
}

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct KohnSham {
  Vec energies;
  Mat orbitals;  // columns
  std::vector<double> occupation;  // per spin
  double mu = 0.0;
  Vec density;
};

KohnSham kohn_sham(const ChainSpec& spec, const Vec& density_in, const ScfConfig& cfg) {
  const std::size_t sites = spec.sites();
  const auto rows = static_cast<Eigen::Index>(sites);
  const double u = spec.interaction();
  const auto pot = spec.potential();
  Vec diag(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double n = std::clamp(density_in(i), 0.0, 2.0);
    diag(i) = pot[static_cast<std::size_t>(i)] + 0.5 * u * n + xc_potential(n, u, cfg.mott_window);
  }
  KohnSham ks;
  if (sites == 1) {
    ks.energies = diag;
    ks.orbitals = Mat::Identity(1, 1);
  } else {
    Eigen::SelfAdjointEigenSolver<Mat> solver;
    solver.computeFromTridiagonal(diag, Vec::Constant(rows - 1, -1.0), Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
      fail(ErrorKind::NumericalFailure, "Kohn-Sham diagonalization failed");
    ks.energies = solver.eigenvalues();
    ks.orbitals = solver.eigenvectors();
  }
  ks.occupation = occupations(ks.energies, static_cast<double>(spec.n_up()), cfg.smearing, ks.mu);
  ks.density = Vec::Zero(rows);
  for (Eigen::Index k = 0; k < rows; ++k) {
    const double f = ks.occupation[static_cast<std::size_t>(k)];
    if (f > 0.0) ks.density += (2.0 * f) * ks.orbitals.col(k).cwiseAbs2();
  }
  return ks;
}

// Static density response dn_i/dv_j at fixed particle number (both spins).
// Every pair weight (f_k - f_l) / (e_k - e_l) is <= 0, so chi = -B B^T.
Mat density_response(const KohnSham& ks, double kt) {
  const Eigen::Index size = ks.energies.size();
  const auto f = [&](Eigen::Index k) { return ks.occupation[static_cast<std::size_t>(k)]; };
  const auto full = [&](Eigen::Index k) { return f(k) > 1.0 - 1e-15; };
  const auto empty = [&](Eigen::Index k) { return f(k) < 1e-15; };
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  for (Eigen::Index k = 0; k < size; ++k) {
    if (empty(k)) continue;
    for (Eigen::Index l = k; l < size; ++l)
      if (!(full(k) && full(l)) && !(l != k && empty(k) && empty(l))) pairs.emplace_back(k, l);
  }
  Mat b(size, static_cast<Eigen::Index>(pairs.size()));
  Eigen::Index col = 0;
  for (const auto& [k, l] : pairs) {
    const double de = ks.energies(k) - ks.energies(l);
    const double w = std::abs(de) < 1e-9 ? f(k) * (1.0 - f(k)) / kt : (f(l) - f(k)) / de;
    // Spin factor 2; off-diagonal pairs stand for both orderings.
    const double scale = std::sqrt(std::max(0.0, (k == l ? 2.0 : 4.0) * w));
    b.col(col++) = scale * ks.orbitals.col(k).cwiseProduct(ks.orbitals.col(l));
  }
  Mat chi = Mat::Zero(size, size);
  chi.selfadjointView<Eigen::Lower>().rankUpdate(b, -1.0);
  chi = chi.selfadjointView<Eigen::Lower>();
  const Vec shift = chi.rowwise().sum();
  const double total = shift.sum();
  if (total < -1e-300) chi -= shift * shift.transpose() / total;
  return chi;
}

// d v_i / d n_i of the effective potential.
Vec potential_slope(const Vec& density, double u, double mott_window) {
  Vec d(density.size());
  const double h = kXcStep;
  for (Eigen::Index i = 0; i < density.size(); ++i) {
    const double n = density(i);
    if (n <= 0.0 || n >= 2.0) {
      d(i) = 0.0;
      continue;
    }
    const double lo = std::max(0.0, n - h), hi = std::min(2.0, n + h);
    d(i) = 0.5 * u + (xc_potential(hi, u, mott_window) - xc_potential(lo, u, mott_window)) / (hi - lo);
  }
  return d;
}

}  // namespace

std::vector<double> kohn_sham_density(const ChainSpec& spec, std::span<const double> density_in,
                                      const ScfConfig& cfg, double* chemical_potential) {
  if (density_in.size() != spec.sites())
    fail(ErrorKind::InvalidInput, "density profile length does not match the chain");
  const Vec n = Eigen::Map<const Vec>(density_in.data(), static_cast<Eigen::Index>(density_in.size()));
  const KohnSham ks = kohn_sham(spec, n, cfg);
  if (chemical_potential) *chemical_potential = ks.mu;
  return {ks.density.data(), ks.density.data() + ks.density.size()};
}

ScfResult solve_scf(const ChainSpec& spec, const ScfConfig& cfg,
                    std::optional<std::vector<double>> initial) {
  validate(cfg);
  const std::size_t sites = spec.sites();
  const auto rows = static_cast<Eigen::Index>(sites);
  const double particles = static_cast<double>(spec.particles());
  if (initial && initial->size() != sites)
    fail(ErrorKind::InvalidInput, "initial density has the wrong length");
  Vec n = initial ? Vec(Eigen::Map<const Vec>(initial->data(), rows))
                  : Vec::Constant(rows, particles / static_cast<double>(sites));

  ScfResult result;
  result.profile.source = DensitySource::Scf;
  const auto note_number = [&](const Vec& v) {
    result.max_number_error = std::max(result.max_number_error, std::abs(v.sum() - particles));
  };
  const auto finish = [&](const Vec& v) {
    result.profile.density.assign(v.data(), v.data() + v.size());
    for (double& x : result.profile.density) x = std::clamp(x, 0.0, 2.0);
    return result;
  };
  note_number(n);

  int evaluations = 0;
  const auto evaluate = [&](const Vec& v) {
    ++evaluations;
    KohnSham ks = kohn_sham(spec, v, cfg);
    note_number(ks.density);
    return ks;
  };
  KohnSham ks = evaluate(n);
  Vec r = ks.density - n;
  int linear_steps = 0;
  Eigen::PartialPivLU<Mat> jacobian;
  bool reuse_jacobian = false;

  // Backtracks along `step`; the last trial is always taken. True on descent.
  const auto line_search = [&](const Vec& step) {
    const double norm = r.norm();
    double lambda = 1.0;
    while (true) {
      Vec trial = n + lambda * step;
      KohnSham next = evaluate(trial);
      Vec r_trial = next.density - trial;
      const double trial_norm = r_trial.norm();
      const bool descent = trial_norm < (1.0 - 1e-4 * lambda) * norm;
      const bool give_up = lambda < kMinLineSearch || evaluations >= cfg.max_iterations ||
                           (reuse_jacobian && !descent);
      if (descent || give_up) {
        if (descent || !reuse_jacobian) {
          n = std::move(trial);
          note_number(n);
          ks = std::move(next);
          r = std::move(r_trial);
        }
        reuse_jacobian = descent && lambda == 1.0 && trial_norm < 0.25 * norm;
        return descent || evaluations >= cfg.max_iterations;
      }
      lambda *= 0.5;
    }
  };

  while (true) {
    const double residual = r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
    result.residuals.push_back(residual);
    result.iterations = static_cast<int>(result.residuals.size());
    result.chemical_potential = ks.mu;
    // Without interaction the Kohn-Sham potential does not depend on n.
    if (spec.interaction() == 0.0) return finish(ks.density);
    if (residual < cfg.tolerance) return finish(n);
    if (evaluations >= cfg.max_iterations) break;

    if (cfg.solver == ScfSolver::Linear || linear_steps > 0) {
      n += (cfg.solver == ScfSolver::Linear ? cfg.mixing : kFallbackMixing) * r;
      if (linear_steps > 0) --linear_steps;
      note_number(n);
      ks = evaluate(n);
      r = ks.density - n;
      continue;
    }

    // Newton step on n_out(n) - n = 0: (I - chi D) dn = r, then backtrack
    // on |r|_2. A factorized Jacobian is reused while full steps contract
    // fast; a reused one that fails is rebuilt before backtracking.
    while (true) {
      if (!reuse_jacobian) {
        const Mat chi = density_response(ks, cfg.smearing);
        const Vec slope = potential_slope(n, spec.interaction(), cfg.mott_window);
        jacobian.compute(Mat::Identity(rows, rows) - chi * slope.asDiagonal());
      }
      Vec step = jacobian.solve(r);
      step.array() += (r.sum() - step.sum()) / static_cast<double>(rows);
      if (line_search(step)) break;
      if (!reuse_jacobian) {
        // A failed line search means a local minimum of |r| away from any
        // root; damped linear steps lead toward a stable fixed point.
        linear_steps = kFallbackSteps;
        break;
      }
      reuse_jacobian = false;
    }
  }
  fail(ErrorKind::Convergence, "SCF did not converge in " + std::to_string(cfg.max_iterations) +
                                   " Kohn-Sham evaluations; " + residual_summary(result.residuals));
}

EntropyReport lda_entropies(const DensityProfile& profile, double interaction) {
  EntropyReport report;
  const std::size_t sites = profile.density.size();
  if (sites == 0) fail(ErrorKind::InvalidInput, "empty density profile");
  report.per_site_von_neumann.reserve(sites);
  report.per_site_linear.reserve(sites);
  for (double n : profile.density) {
    if (!(n >= -kClampTolerance && n <= 2.0 + kClampTolerance))
      fail(ErrorKind::InvalidInput, "site density " + std::to_string(n) + " outside [0,2]");
    const auto h = homogeneous_entropies(std::clamp(n, 0.0, 2.0), interaction);
    report.per_site_von_neumann.push_back(h.von_neumann);
    report.per_site_linear.push_back(h.linear);
    report.von_neumann += h.von_neumann;
    report.linear += h.linear;
  }
  report.von_neumann /= static_cast<double>(sites);
  report.linear /= static_cast<double>(sites);
  return report;
}

EntropyReport disorder_ensemble(const DisorderEnsemble& e, const ScfConfig& cfg, unsigned workers) {
  if (e.samples == 0) fail(ErrorKind::InvalidInput, "ensemble needs at least one sample");
  if (e.particles % 2 != 0) fail(ErrorKind::InvalidSpec, "total particle number must be even");
  validate(PotentialSpec{Disorder{e.concentration, e.strength, 0}});
  validate(cfg);

  std::vector<double> s(e.samples), l(e.samples);
  parallel_for(e.samples, workers, [&](std::size_t k) {
    const std::uint64_t seed = e.master_seed ^ static_cast<std::uint64_t>(k);
    try {
      const ChainSpec spec = ChainSpec::with_potential(
          e.sites, e.particles / 2, e.interaction, Disorder{e.concentration, e.strength, seed});
      const auto report = lda_entropies(solve_scf(spec, cfg).profile, e.interaction);
      s[k] = report.von_neumann;
      l[k] = report.linear;
    } catch (const Error& err) {
      throw Error(err.kind(), "disorder sample " + std::to_string(k) + " (seed " +
                                  std::to_string(seed) + "): " + err.what());
    }
  });

  const auto n = static_cast<double>(e.samples);
  const auto mean_std = [n](const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    return std::pair{mean, v.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0};
  };
  EntropyReport report;
  std::tie(report.von_neumann, report.von_neumann_std) = mean_std(s);
  std::tie(report.linear, report.linear_std) = mean_std(l);
  report.samples = e.samples;
  return report;
}

}  // namespace hubent

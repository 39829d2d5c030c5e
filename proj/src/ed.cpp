#include "hubent/ed.hpp"

#include <bit>
#include <cmath>
#include <random>
#include <string>

#include "hubent/errors.hpp"
#include "hubent/parallel.hpp"

namespace hubent {

namespace {

std::vector<std::uint64_t> masks_with_popcount(std::size_t sites, std::size_t count) {
  std::vector<std::uint64_t> masks;
  if (count == 0) return {0};
  std::uint64_t m = (std::uint64_t{1} << count) - 1;
  const std::uint64_t limit = std::uint64_t{1} << sites;
  while (m < limit) {
    masks.push_back(m);
    // Gosper's hack: next larger integer with the same popcount.
    const std::uint64_t c = m & (~m + 1);
    const std::uint64_t r = m + c;
    m = (((r ^ m) >> 2) / c) | r;
  }
  return masks;
}

struct Hop {
  std::uint32_t target;  // rank within the spin sector
  double amplitude;      // -t times the fermionic sign
};

// Nearest-neighbour hops of one spin sector, spin-major ordering. Open chain:
// no occupied mode lies strictly between neighbours, but the sign is counted
// generally so the rule stays visible.
std::vector<std::vector<Hop>> sector_hops(const FockBasis& basis,
                                          std::span<const std::uint64_t> masks) {
  std::vector<std::vector<Hop>> hops(masks.size());
  const std::size_t sites = basis.sites();
  for (std::size_t a = 0; a < masks.size(); ++a) {
    const std::uint64_t m = masks[a];
    for (std::size_t i = 0; i + 1 < sites; ++i) {
      const std::uint64_t bi = std::uint64_t{1} << i, bj = std::uint64_t{1} << (i + 1);
      if (((m & bi) != 0) == ((m & bj) != 0)) continue;
      const std::uint64_t target = m ^ bi ^ bj;
      const std::uint64_t between = (bj - 1) & ~((bi << 1) - 1);
      const double sign = (std::popcount(m & between) % 2 == 0) ? 1.0 : -1.0;
      hops[a].push_back({static_cast<std::uint32_t>(basis.rank(target)), -sign});
    }
  }
  return hops;
}

std::vector<double> sector_potential(const ChainSpec& spec, std::span<const std::uint64_t> masks) {
  std::vector<double> out(masks.size(), 0.0);
  const auto v = spec.potential();
  for (std::size_t a = 0; a < masks.size(); ++a)
    for (std::size_t i = 0; i < v.size(); ++i)
      if (masks[a] >> i & 1u) out[a] += v[i];
  return out;
}

void check_consistent(const ChainSpec& spec, const FockBasis& basis) {
  if (spec.sites() != basis.sites() || spec.n_up() != basis.n_up() ||
      spec.n_down() != basis.n_down())
    fail(ErrorKind::InvalidInput, "chain spec and Fock basis disagree on size or particle numbers");
}

// Parity of occupied modes strictly between two modes in the site-major order.
int site_major_parity(std::uint64_t up, std::uint64_t down, std::size_t sites, std::size_t mode_a,
                      std::size_t mode_b) {
  if (mode_a > mode_b) std::swap(mode_a, mode_b);
  int count = 0;
  for (std::size_t mode = mode_a + 1; mode < mode_b; ++mode) {
    const std::size_t site = mode / 2;
    if (site >= sites) break;
    const std::uint64_t mask = mode % 2 == 0 ? up : down;
    count += static_cast<int>(mask >> site & 1u);
  }
  return count % 2;
}

}  // namespace

FockBasis::FockBasis(std::size_t sites, std::size_t n_up, std::size_t n_down)
    : sites_(sites), n_up_(n_up), n_down_(n_down) {
  if (sites == 0 || sites > 62) fail(ErrorKind::InvalidInput, "Fock basis supports 1..62 sites");
  if (n_up > sites || n_down > sites)
    fail(ErrorKind::InvalidInput, "particle number exceeds the number of sites");
  binomial_.assign(sites + 1, std::vector<std::uint64_t>(sites + 2, 0));
  for (std::size_t n = 0; n <= sites; ++n) {
    binomial_[n][0] = 1;
    for (std::size_t k = 1; k <= n; ++k) binomial_[n][k] = binomial_[n - 1][k - 1] + (k <= n - 1 ? binomial_[n - 1][k] : 0);
  }
  up_ = masks_with_popcount(sites, n_up);
  down_ = masks_with_popcount(sites, n_down);
}

std::size_t FockBasis::rank(std::uint64_t mask) const {
  std::size_t r = 0, k = 0;
  while (mask != 0) {
    const auto pos = static_cast<std::size_t>(std::countr_zero(mask));
    ++k;
    if (pos >= k) r += binomial_[pos][k];
    mask &= mask - 1;
  }
  return r;
}

double FockBasis::dimension_of(std::size_t sites, std::size_t n_up, std::size_t n_down) {
  const auto choose = [](std::size_t n, std::size_t k) {
    if (k > n) return 0.0;
    double c = 1.0;
    for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    return std::round(c);
  };
  return choose(sites, n_up) * choose(sites, n_down);
}

void apply_hamiltonian(const ChainSpec& spec, const FockBasis& basis, std::span<const double> v,
                       std::span<double> out, unsigned workers) {
  check_consistent(spec, basis);
  const std::size_t dim = basis.dimension();
  if (v.size() != dim || out.size() != dim)
    fail(ErrorKind::InvalidInput, "vector length " + std::to_string(v.size()) +
                                      " does not match basis dimension " + std::to_string(dim));
  const auto up = basis.up_masks();
  const auto down = basis.down_masks();
  const auto up_hops = sector_hops(basis, up);
  const auto down_hops = sector_hops(basis, down);
  const auto up_pot = sector_potential(spec, up);
  const auto down_pot = sector_potential(spec, down);
  const double u = spec.interaction();
  const std::size_t nd = down.size();

  parallel_for(up.size(), workers, [&](std::size_t a) {
    for (std::size_t b = 0; b < nd; ++b) {
      const std::size_t row = a * nd + b;
      double acc = (u * std::popcount(up[a] & down[b]) + up_pot[a] + down_pot[b]) * v[row];
      for (const Hop& h : up_hops[a]) acc += h.amplitude * v[h.target * nd + b];
      for (const Hop& h : down_hops[b]) acc += h.amplitude * v[a * nd + h.target];
      out[row] = acc;
    }
  });
}

Eigen::MatrixXd dense_hamiltonian(const ChainSpec& spec, const FockBasis& basis,
                                  ModeOrdering ordering) {
  check_consistent(spec, basis);
  const std::size_t dim = basis.dimension();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                            static_cast<Eigen::Index>(dim));
  const auto pot = spec.potential();
  const std::size_t sites = basis.sites();
  for (std::size_t col = 0; col < dim; ++col) {
    const std::uint64_t up = basis.up_mask(col), down = basis.down_mask(col);
    double diag = spec.interaction() * std::popcount(up & down);
    for (std::size_t i = 0; i < sites; ++i)
      diag += pot[i] * static_cast<double>((up >> i & 1u) + (down >> i & 1u));
    h(static_cast<Eigen::Index>(col), static_cast<Eigen::Index>(col)) = diag;

    for (int spin = 0; spin < 2; ++spin) {
      const std::uint64_t m = spin == 0 ? up : down;
      for (std::size_t i = 0; i + 1 < sites; ++i) {
        for (auto [from, to] : {std::pair{i, i + 1}, std::pair{i + 1, i}}) {
          if (!(m >> from & 1u) || (m >> to & 1u)) continue;
          const std::uint64_t moved = m ^ (std::uint64_t{1} << from) ^ (std::uint64_t{1} << to);
          int parity;
          if (ordering == ModeOrdering::SpinMajor) {
            // Modes of the other spin sit entirely before or after this sector.
            const std::uint64_t between =
                ((std::uint64_t{1} << std::max(from, to)) - 1) &
                ~((std::uint64_t{1} << (std::min(from, to) + 1)) - 1);
            parity = std::popcount(m & between) % 2;
          } else {
            parity = site_major_parity(up, down, sites, 2 * from + spin, 2 * to + spin);
          }
          const std::size_t row =
              spin == 0 ? basis.index(moved, down) : basis.index(up, moved);
          h(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) +=
              parity == 0 ? -1.0 : 1.0;
        }
      }
    }
  }
  return h;
}

namespace {

// Solves (T - shift) z = b in place for symmetric tridiagonal T by Gaussian
// elimination with partial pivoting; zero pivots are floored so that inverse
// iteration at an exact eigenvalue still yields the eigenvector direction.
void shifted_tridiagonal_solve(const Eigen::VectorXd& diag, const Eigen::VectorXd& off, double shift,
                               Eigen::VectorXd& b) {
  const Eigen::Index n = diag.size();
  Eigen::VectorXd d = diag.array() - shift;
  Eigen::VectorXd lo = off, up = off, up2 = Eigen::VectorXd::Zero(std::max<Eigen::Index>(n - 2, 0));
  const double floor = 1e-300 + 1e-15 * (diag.cwiseAbs().maxCoeff() + (n > 1 ? off.cwiseAbs().maxCoeff() : 0.0));
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(lo[i])) {
      if (std::abs(d[i]) < floor) d[i] = floor;
      const double f = lo[i] / d[i];
      d[i + 1] -= f * up[i];
      b[i + 1] -= f * b[i];
    } else {
      const double f = d[i] / lo[i];
      d[i] = lo[i];
      const double next = d[i + 1];
      d[i + 1] = up[i] - f * next;
      if (i + 2 < n) {
        up2[i] = up[i + 1];
        up[i + 1] = -f * up2[i];
      }
      up[i] = next;
      const double bi = b[i];
      b[i] = b[i + 1];
      b[i + 1] = bi - f * b[i + 1];
    }
  }
  if (std::abs(d[n - 1]) < floor) d[n - 1] = floor;
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    double r = b[i];
    if (i + 1 < n) r -= up[i] * b[i + 1];
    if (i + 2 < n) r -= up2[i] * b[i + 2];
    b[i] = r / d[i];
  }
}

// Householder tridiagonalization, eigenvalues of the tridiagonal form, then
// the lowest eigenvector alone by inverse iteration. Avoids accumulating the
// full eigenvector matrix, which dominates the cost at D ~ 10^3.
GroundState dense_ground_state(const ChainSpec& spec, const FockBasis& basis) {
  const Eigen::MatrixXd h = dense_hamiltonian(spec, basis);
  const Eigen::Index n = h.rows();
  GroundState gs;
  if (n == 1) {
    gs.energy = h(0, 0);
    gs.amplitudes = {1.0};
    return gs;
  }
  const Eigen::Tridiagonalization<Eigen::MatrixXd> tri(h);
  const Eigen::VectorXd diag = tri.diagonal();
  const Eigen::VectorXd off = tri.subDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> values;
  values.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  if (values.info() != Eigen::Success) fail(ErrorKind::NumericalFailure, "dense eigensolver failed");
  gs.energy = values.eigenvalues()(0);
  gs.gap = values.eigenvalues()(1) - values.eigenvalues()(0);

  Eigen::VectorXd z = Eigen::VectorXd::Ones(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] += 1e-3 * static_cast<double>(i % 7);
  for (int pass = 0; pass < 3; ++pass) {
    shifted_tridiagonal_solve(diag, off, gs.energy, z);
    z.normalize();
  }
  const Eigen::VectorXd x = tri.matrixQ() * z;
  gs.amplitudes.assign(x.data(), x.data() + n);

  std::vector<double> hx(static_cast<std::size_t>(n));
  Eigen::Map<Eigen::VectorXd>(hx.data(), n) = h * x;
  double residual = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) residual = std::max(residual, std::abs(hx[i] - gs.energy * x[i]));
  if (residual > 1e-8 * std::max(1.0, std::abs(gs.energy)))
    fail(ErrorKind::NumericalFailure, "dense ground vector residual " + std::to_string(residual));
  return gs;
}

// Explicitly restarted Lanczos with full reorthogonalization inside each
// cycle; every cycle restarts from the current Ritz vector.
GroundState lanczos_ground_state(const ChainSpec& spec, const FockBasis& basis,
                                 const EdOptions& opt) {
  const std::size_t dim = basis.dimension();
  const std::size_t m = std::max<std::size_t>(2, std::min(opt.krylov_size, dim));
  const auto rows = static_cast<Eigen::Index>(dim);
  using Vec = Eigen::VectorXd;

  Vec x(rows);
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (Eigen::Index i = 0; i < rows; ++i) x(i) = uni(rng);

  // Column-major Krylov block so both Gram-Schmidt passes are matrix-vector products.
  Eigen::MatrixXd krylov(rows, static_cast<Eigen::Index>(m));
  Vec w(rows);
  GroundState gs;

  for (int cycle = 0; cycle < opt.max_restarts; ++cycle) {
    krylov.col(0) = x / x.norm();
    std::vector<double> alpha, beta;
    Vec ritz;
    Eigen::Index used = 0;
    bool invariant = false;
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(m); ++j) {
      apply_hamiltonian(spec, basis, std::span<const double>(krylov.col(j).data(), dim),
                        std::span<double>(w.data(), dim), opt.workers);
      ++gs.matvecs;
      alpha.push_back(krylov.col(j).dot(w));
      w -= alpha.back() * krylov.col(j);
      if (j > 0) w -= beta.back() * krylov.col(j - 1);
      // Full reorthogonalization; a second pass only when the first cancels heavily.
      const auto block = krylov.leftCols(j + 1);
      double b = w.norm();
      for (int pass = 0; pass < 2; ++pass) {
        const Vec c = block.transpose() * w;
        w.noalias() -= block * c;
        const double after = w.norm();
        const bool settled = after > 0.7 * b;
        b = after;
        if (settled) break;
      }
      used = j + 1;
      const Vec diag = Eigen::Map<const Vec>(alpha.data(), used);
      const Vec sub = Eigen::Map<const Vec>(beta.data(), used - 1);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      const double theta = tri.eigenvalues()(0);
      ritz = tri.eigenvectors().col(0);
      if (b < 1e-13 * std::max(1.0, std::abs(theta))) {
        invariant = true;
        break;
      }
      if (b * std::abs(ritz(used - 1)) < 0.1 * opt.residual_tolerance ||
          j + 1 == static_cast<Eigen::Index>(m))
        break;
      beta.push_back(b);
      krylov.col(j + 1) = w / b;
    }

    x.noalias() = krylov.leftCols(used) * ritz;
    x /= x.norm();
    apply_hamiltonian(spec, basis, std::span<const double>(x.data(), dim),
                      std::span<double>(w.data(), dim), opt.workers);
    ++gs.matvecs;
    const double rq = x.dot(w);
    const double residual = (w - rq * x).norm();
    if (residual < opt.residual_tolerance || invariant) {
      gs.energy = rq;
      gs.amplitudes.assign(x.data(), x.data() + dim);
      return gs;
    }
  }
  fail(ErrorKind::NumericalFailure, "Lanczos did not converge after " +
                                        std::to_string(opt.max_restarts) + " restarts (D=" +
                                        std::to_string(dim) + ")");
}

}  // namespace

GroundState ground_state(const ChainSpec& spec, const EdOptions& options) {
  const double dim = FockBasis::dimension_of(spec.sites(), spec.n_up(), spec.n_down());
  if (dim > static_cast<double>(options.dimension_cap))
    fail(ErrorKind::Capacity, "basis dimension " + std::to_string(static_cast<long long>(dim)) +
                                  " exceeds the cap " + std::to_string(options.dimension_cap));
  const FockBasis basis(spec.sites(), spec.n_up(), spec.n_down());
  const bool dense = options.method == EigenMethod::Dense ||
                     (options.method == EigenMethod::Auto && basis.dimension() <= options.dense_threshold);
  if (dense) return dense_ground_state(spec, basis);
  return lanczos_ground_state(spec, basis, options);
}

OccupationProbabilities site_probabilities(const GroundState& gs, const FockBasis& basis,
                                           std::size_t site) {
  if (site >= basis.sites()) fail(ErrorKind::InvalidInput, "site index out of range");
  if (gs.amplitudes.size() != basis.dimension())
    fail(ErrorKind::InvalidInput, "ground state does not match the basis");
  double w[4] = {0.0, 0.0, 0.0, 0.0};  // up, down, double, empty
  const std::size_t nd = basis.down_dimension();
  const auto up = basis.up_masks();
  const auto down = basis.down_masks();
  for (std::size_t a = 0; a < up.size(); ++a) {
    const bool u = up[a] >> site & 1u;
    for (std::size_t b = 0; b < nd; ++b) {
      const bool d = down[b] >> site & 1u;
      const double amp = gs.amplitudes[a * nd + b];
      w[u ? (d ? 2 : 0) : (d ? 1 : 3)] += amp * amp;
    }
  }
  const double total = w[0] + w[1] + w[2] + w[3];
  return OccupationProbabilities::checked(w[0] / total, w[1] / total, w[2] / total, w[3] / total);
}

DensityProfile density_profile(const GroundState& gs, const FockBasis& basis) {
  DensityProfile p;
  p.source = DensitySource::Exact;
  p.density.reserve(basis.sites());
  for (std::size_t i = 0; i < basis.sites(); ++i) {
    const auto w = site_probabilities(gs, basis, i);
    p.density.push_back(w.up + w.down + 2.0 * w.dbl);
  }
  return p;
}

}  // namespace hubent

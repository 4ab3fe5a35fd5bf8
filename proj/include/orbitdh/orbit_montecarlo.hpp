#pragma once

// Monte Carlo pushforward of a coadjoint orbit of SU(n), n in {2, 3}.
//
// A Haar-random g in SU(n) gives a point g Lambda g^dagger of the orbit
// through Lambda = embed_lambda(lambda'). The moment map for the maximal
// torus is restriction to t, i.e. the diagonal d of g Lambda g^dagger, whose
// fundamental-weight coordinates are d_i - d_{i+1}. Histograms of these
// coordinates estimate the normalized Duistermaat-Heckman density.
//
// Floating point lives only here. Each sample draws from its own engine keyed
// by (seed, index), so counts do not depend on the number of threads.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "orbitdh/dh_core.hpp"
#include "orbitdh/errors.hpp"
#include "orbitdh/rational.hpp"
#include "orbitdh/rootsys.hpp"
#include "orbitdh/weyl.hpp"

namespace orbitdh {

using Complex = std::complex<double>;
using ComplexMatrix = std::vector<std::vector<Complex>>;

inline ComplexMatrix complex_zero(std::size_t n) { return ComplexMatrix(n, std::vector<Complex>(n, Complex(0))); }

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t n = a.size();
  ComplexMatrix c = complex_zero(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix c = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) c[i][j] -= b[i][j];
  return c;
}

inline ComplexMatrix operator*(Complex k, const ComplexMatrix& a) {
  ComplexMatrix c = a;
  for (auto& row : c)
    for (auto& x : row) x *= k;
  return c;
}

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

inline ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix c = complex_zero(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) c[i][j] = std::conj(a[j][i]);
  return c;
}

// sl2-triple for the positive root e_i - e_j of A_{n-1}; all entries are
// small Gaussian integers, so products and commutators are exact in double.
struct ChevalleyTriple {
  std::size_t i = 0, j = 0;             // alpha = e_i - e_j, i < j (0-based)
  std::vector<std::int64_t> root;       // simple-root coordinates
  ComplexMatrix x, y, h;                // E_ij, E_ji, E_ii - E_jj
  ComplexMatrix u, v;                   // X - Y and sqrt(-1)(X + Y), in su(n)
};

inline void check_su_rank(std::size_t n) {
  require(n == 2 || n == 3, "orbit sampling supports SU(2) and SU(3) only, got n = " + std::to_string(n));
}

// Triples in the order of build_root_system("A{n-1}").positive_roots().
inline std::vector<ChevalleyTriple> build_chevalley(std::size_t n) {
  check_su_rank(n);
  const auto rs = build_root_system("A" + std::to_string(n - 1));
  std::vector<ChevalleyTriple> out;
  for (const auto& root : rs.positive_roots()) {
    // e_i - e_j = alpha_i + ... + alpha_{j-1}
    const auto first = std::find(root.begin(), root.end(), 1);
    const auto last = std::find(first, root.end(), 0);
    ChevalleyTriple t;
    t.i = static_cast<std::size_t>(first - root.begin());
    t.j = static_cast<std::size_t>(last - root.begin());
    t.root = root;
    t.x = t.y = t.h = complex_zero(n);
    t.x[t.i][t.j] = 1;
    t.y[t.j][t.i] = 1;
    t.h[t.i][t.i] = 1;
    t.h[t.j][t.j] = -1;
    t.u = t.x - t.y;
    ComplexMatrix sum = t.x;
    sum[t.j][t.i] += 1;
    t.v = Complex(0, 1) * sum;
    out.push_back(std::move(t));
  }
  return out;
}

// Diagonal of the traceless Lambda with tr(Lambda H_alpha) / form_scale =
// <lambda', H_alpha> for the invariant form form_scale * tr(XY): entries
// Lambda_i - Lambda_{i+1} = lambda'_i / form_scale, strictly decreasing.
inline RationalVector embed_lambda(std::size_t n, const Weight& lambda, const Rational& form_scale = Rational(1)) {
  check_su_rank(n);
  require(lambda.size() == n - 1, "lambda' for SU(" + std::to_string(n) + ") needs " + std::to_string(n - 1) +
                                      " coordinates, got " + std::to_string(lambda.size()));
  require(sgn(form_scale) > 0, "form scale must be positive");
  require(is_strongly_dominant(lambda),
          "lambda' = " + lambda.str() + " lies on a wall: the orbit is not regular (equal diagonal entries)");
  RationalVector diag(n, Rational(0));
  Rational weighted(0);
  for (std::size_t i = 0; i + 1 < n; ++i) weighted += Rational(static_cast<long>(i + 1)) * lambda[i];
  diag[n - 1] = -weighted / Rational(static_cast<long>(n));
  for (std::size_t k = n - 1; k-- > 0;) diag[k] = diag[k + 1] + lambda[k];
  for (auto& d : diag) d /= form_scale;
  return diag;
}

// Fundamental-weight coordinates of the diagonal of Lambda permuted by every
// permutation: the images of the torus-fixed points of the orbit.
inline std::vector<Weight> fixed_point_images(std::size_t n, const Weight& lambda) {
  const auto diag = embed_lambda(n, lambda);
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::vector<Weight> out;
  do {
    Weight w = Weight::zero(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) w[i] = diag[perm[i]] - diag[perm[i + 1]];
    out.push_back(std::move(w));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

// Regular grid over a box in fundamental-weight coordinates; exact edges.
struct BinGrid {
  RationalVector lo, hi;
  std::vector<std::size_t> bins;

  std::size_t dim() const { return bins.size(); }
  std::size_t size() const {
    std::size_t total = 1;
    for (auto b : bins) total *= b;
    return total;
  }
  Rational width(std::size_t axis) const { return (hi[axis] - lo[axis]) / Rational(static_cast<long>(bins[axis])); }
  Rational edge(std::size_t axis, std::size_t k) const {
    return lo[axis] + width(axis) * Rational(static_cast<long>(k));
  }
  // Per-axis indices of a flat (row-major, axis 0 slowest) bin index.
  std::vector<std::size_t> unflatten(std::size_t flat) const {
    std::vector<std::size_t> idx(dim());
    for (std::size_t a = dim(); a-- > 0;) {
      idx[a] = flat % bins[a];
      flat /= bins[a];
    }
    return idx;
  }
  std::vector<double> center(std::size_t flat) const {
    const auto idx = unflatten(flat);
    std::vector<double> c(dim());
    for (std::size_t a = 0; a < dim(); ++a) c[a] = Rational(edge(a, idx[a]) + width(a) / 2).get_d();
    return c;
  }
  std::optional<std::size_t> locate(const std::vector<double>& point) const {
    std::size_t flat = 0;
    for (std::size_t a = 0; a < dim(); ++a) {
      const double l = lo[a].get_d(), h = hi[a].get_d();
      if (!(point[a] >= l && point[a] <= h)) return std::nullopt;
      auto k = static_cast<std::size_t>(std::floor((point[a] - l) / (h - l) * static_cast<double>(bins[a])));
      k = std::min(k, bins[a] - 1);
      flat = flat * bins[a] + k;
    }
    return flat;
  }
};

// Bounding box of the Weyl-orbit hull of lambda', `bins` bins per axis.
inline BinGrid hull_bounding_grid(const RootSystem& rs, const Weight& lambda, std::size_t bins) {
  require(bins > 0, "bin count must be positive");
  const WeylGroup wg(rs);
  BinGrid g{lambda.coords, lambda.coords, std::vector<std::size_t>(rs.rank(), bins)};
  for (const auto& w : wg.elements()) {
    const Weight x = act(w, lambda);
    for (std::size_t a = 0; a < rs.rank(); ++a) {
      g.lo[a] = std::min(g.lo[a], x[a]);
      g.hi[a] = std::max(g.hi[a], x[a]);
    }
  }
  return g;
}

struct OrbitSampleConfig {
  std::size_t n = 3;
  Weight lambda;
  std::uint64_t sample_count = 0;
  BinGrid grid;
  std::uint64_t seed = 0;
  unsigned threads = 0;                  // 0: hardware concurrency
  Rational form_scale = Rational(1);     // invariant form form_scale * tr(XY)
  std::optional<IntMatrix> transform;    // Weyl action applied to each image before binning
};

struct EmpiricalDensity {
  std::size_t n = 0;
  Weight lambda;
  BinGrid grid;
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;     // samples that landed in the grid
  std::uint64_t outside = 0;   // samples outside the grid box

  std::vector<double> frequencies() const {
    std::vector<double> f(counts.size(), 0.0);
    if (total == 0) return f;
    for (std::size_t i = 0; i < counts.size(); ++i) f[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
    return f;
  }
};

namespace detail {

// Seed for the engine of sample `index`: a splitmix64 finalizer over the pair.
inline std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed ^ (index * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Haar-random unitary by Gram-Schmidt on a complex Gaussian matrix (the
// resulting R has positive diagonal, so no phase correction is needed), then
// the first column is rotated by conj(det) to land in SU(n).
template <class Engine>
ComplexMatrix haar_special_unitary(std::size_t n, Engine& engine) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix q = complex_zero(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double re = normal(engine);
      const double im = normal(engine);
      q[i][j] = Complex(re, im);
    }
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      Complex proj(0);
      for (std::size_t i = 0; i < n; ++i) proj += std::conj(q[i][k]) * q[i][j];
      for (std::size_t i = 0; i < n; ++i) q[i][j] -= proj * q[i][k];
    }
    double norm = 0;
    for (std::size_t i = 0; i < n; ++i) norm += std::norm(q[i][j]);
    norm = std::sqrt(norm);
    ensure(norm > 0, "degenerate Gaussian matrix");
    for (std::size_t i = 0; i < n; ++i) q[i][j] /= norm;
  }
  Complex det;
  if (n == 2) {
    det = q[0][0] * q[1][1] - q[0][1] * q[1][0];
  } else {
    det = q[0][0] * (q[1][1] * q[2][2] - q[1][2] * q[2][1]) - q[0][1] * (q[1][0] * q[2][2] - q[1][2] * q[2][0]) +
          q[0][2] * (q[1][0] * q[2][1] - q[1][1] * q[2][0]);
  }
  const Complex fix = std::conj(det) / std::abs(det);
  for (std::size_t i = 0; i < n; ++i) q[i][0] *= fix;
  return q;
}

}  // namespace detail

// Moment-map image of sample `index`: fundamental-weight coordinates of the
// diagonal of g Lambda g^dagger, measured with the configured form.
inline std::vector<double> moment_image(const OrbitSampleConfig& cfg, const std::vector<double>& diag,
                                        std::uint64_t index) {
  std::mt19937_64 engine(detail::sample_seed(cfg.seed, index));
  const auto g = detail::haar_special_unitary(cfg.n, engine);
  std::vector<double> d(cfg.n, 0.0);
  for (std::size_t k = 0; k < cfg.n; ++k)
    for (std::size_t m = 0; m < cfg.n; ++m) d[k] += std::norm(g[k][m]) * diag[m];
  const double scale = cfg.form_scale.get_d();
  std::vector<double> c(cfg.n - 1);
  for (std::size_t i = 0; i + 1 < cfg.n; ++i) c[i] = scale * (d[i] - d[i + 1]);
  if (cfg.transform) {
    std::vector<double> t(c.size(), 0.0);
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = 0; j < c.size(); ++j) t[i] += static_cast<double>((*cfg.transform)[i][j]) * c[j];
    c = std::move(t);
  }
  return c;
}

inline void validate(const OrbitSampleConfig& cfg) {
  check_su_rank(cfg.n);
  require(cfg.lambda.size() == cfg.n - 1, "lambda' must have " + std::to_string(cfg.n - 1) + " coordinates");
  require(cfg.lambda.is_integral(), "lambda' must be integral, got " + cfg.lambda.str());
  require(cfg.sample_count > 0, "sample count must be positive");
  require(cfg.grid.dim() == cfg.n - 1 && cfg.grid.lo.size() == cfg.n - 1 && cfg.grid.hi.size() == cfg.n - 1,
          "bin grid must have dimension " + std::to_string(cfg.n - 1));
  for (std::size_t a = 0; a < cfg.grid.dim(); ++a)
    require(cfg.grid.bins[a] > 0 && cfg.grid.lo[a] < cfg.grid.hi[a], "bin grid axes must be nonempty");
  if (cfg.transform) {
    require(cfg.transform->size() == cfg.n - 1, "transform has the wrong size");
    for (const auto& row : *cfg.transform) require(row.size() == cfg.n - 1, "transform has the wrong size");
  }
}

inline EmpiricalDensity sample_pushforward(const OrbitSampleConfig& cfg) {
  validate(cfg);
  const auto exact_diag = embed_lambda(cfg.n, cfg.lambda, cfg.form_scale);
  std::vector<double> diag;
  for (const auto& d : exact_diag) diag.push_back(d.get_d());

  unsigned workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, cfg.sample_count));
  const std::size_t cells = cfg.grid.size();
  std::vector<std::vector<std::uint64_t>> partial(workers, std::vector<std::uint64_t>(cells, 0));
  std::vector<std::uint64_t> outside(workers, 0);

  auto work = [&](unsigned w) {
    const std::uint64_t begin = cfg.sample_count * w / workers;
    const std::uint64_t end = cfg.sample_count * (w + 1) / workers;
    for (std::uint64_t i = begin; i < end; ++i) {
      const auto bin = cfg.grid.locate(moment_image(cfg, diag, i));
      if (bin)
        ++partial[w][*bin];
      else
        ++outside[w];
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }

  EmpiricalDensity e{cfg.n, cfg.lambda, cfg.grid, std::vector<std::uint64_t>(cells, 0), 0, 0};
  for (unsigned w = 0; w < workers; ++w) {
    for (std::size_t b = 0; b < cells; ++b) e.counts[b] += partial[w][b];
    e.outside += outside[w];
  }
  for (auto c : e.counts) e.total += c;
  return e;
}

struct ComparisonReport {
  std::vector<double> expected;    // normalized exact bin masses
  std::vector<double> empirical;   // normalized histogram
  std::vector<double> z_scores;    // (count - N p) / max(1, sqrt(N p (1 - p)))
  std::vector<bool> near_wall;     // bins where the density is not a single polynomial
  double tv_distance = 0;
  double noise_floor = 0;          // expected TV from binomial noise alone
  double max_abs_z = 0;
  std::uint64_t samples = 0;
};

// Expected total-variation distance between a multinomial histogram of
// `samples` draws and its cell probabilities p, using the half-normal mean
// sqrt(2/pi) sigma per cell.
inline double expected_tv_noise(const std::vector<double>& p, std::uint64_t samples) {
  require(samples > 0, "sample count must be positive");
  double total = 0;
  for (double q : p) total += std::sqrt(q * (1 - q) / static_cast<double>(samples));
  return 0.5 * std::sqrt(2 / std::numbers::pi) * total;
}

namespace detail {

// True if the values on a (q+1)^dim lattice of points are those of a
// polynomial of total degree <= s: all mixed differences of order s+1 vanish.
inline BigInt choose(std::size_t n, std::size_t k) {
  BigInt c;
  mpz_bin_uiui(c.get_mpz_t(), n, k);
  return c;
}

inline bool is_polynomial_on_lattice(const std::vector<Rational>& values, std::size_t dim, std::size_t q,
                                     std::size_t s) {
  const std::size_t side = q + 1, order = s + 1;
  if (side <= order) return true;
  const std::size_t side_j = dim == 1 ? 1 : side;
  auto at = [&](std::size_t i, std::size_t j) -> const Rational& { return values[i * side_j + j]; };
  // difference Delta_1^a Delta_2^b with a + b = order (b = 0 in one dimension)
  for (std::size_t a = (dim == 1 ? order : 0); a <= order; ++a) {
    const std::size_t b = order - a;
    for (std::size_t i = 0; i + a < side; ++i)
      for (std::size_t j = 0; j + b < side_j; ++j) {
        Rational d(0);
        for (std::size_t u = 0; u <= a; ++u)
          for (std::size_t v = 0; v <= b; ++v) {
            const Rational term = Rational(choose(a, u) * choose(b, v)) * at(i + u, j + v);
            if ((a - u + b - v) % 2)
              d -= term;
            else
              d += term;
          }
        if (sgn(d) != 0) return false;
      }
  }
  return true;
}

}  // namespace detail

// Exact density mass of every bin, by the midpoint rule on a q x q subgrid of
// each bin (exact where the density is a single polynomial of degree <= 1,
// which covers the rank-one and rank-two cases away from walls). Bins whose
// corner lattice is not polynomial are flagged and integrated on a subgrid
// four times finer.
struct ExactBinMasses {
  std::vector<Rational> mass;
  std::vector<bool> near_wall;
};

inline ExactBinMasses exact_bin_masses(const DHContext& ctx, const Weight& lambda, const BinGrid& grid,
                                       std::size_t q = 4) {
  const auto& rs = ctx.root_system();
  require(grid.dim() == rs.rank() && (grid.dim() == 1 || grid.dim() == 2), "bin grid must be one- or two-dimensional");
  require(q > 0, "subdivision must be positive");
  const std::size_t dim = grid.dim();

  auto integrate = [&](const std::vector<std::size_t>& idx, std::size_t sub) -> Rational {
    Rational sum(0);
    const std::size_t cells = dim == 1 ? sub : sub * sub;
    for (std::size_t c = 0; c < cells; ++c) {
      Weight mu = Weight::zero(dim);
      const std::size_t parts[2] = {dim == 1 ? c : c / sub, c % sub};
      for (std::size_t a = 0; a < dim; ++a) {
        const Rational step = grid.width(a) / Rational(static_cast<long>(sub));
        mu[a] = grid.edge(a, idx[a]) + step * (Rational(static_cast<long>(parts[a])) + Rational(1, 2));
      }
      sum += ctx.density(lambda, mu);
    }
    Rational area(1);
    for (std::size_t a = 0; a < dim; ++a) area *= grid.width(a) / Rational(static_cast<long>(sub));
    return sum * area;
  };

  ExactBinMasses out{std::vector<Rational>(grid.size()), std::vector<bool>(grid.size(), false)};
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    const auto idx = grid.unflatten(flat);
    // density on the closed (q+1)^dim lattice of the bin
    std::vector<Rational> lattice;
    const std::size_t side = q + 1, points = dim == 1 ? side : side * side;
    for (std::size_t p = 0; p < points; ++p) {
      Weight mu = Weight::zero(dim);
      const std::size_t parts[2] = {dim == 1 ? p : p / side, p % side};
      for (std::size_t a = 0; a < dim; ++a)
        mu[a] = grid.edge(a, idx[a]) + grid.width(a) * make_rational(static_cast<std::int64_t>(parts[a]), static_cast<std::int64_t>(q));
      lattice.push_back(ctx.density(lambda, mu));
    }
    out.near_wall[flat] = !detail::is_polynomial_on_lattice(lattice, dim, q, rs.s());
    out.mass[flat] = integrate(idx, out.near_wall[flat] ? 4 * q : q);
  }
  return out;
}

// Comparison against precomputed exact bin masses on the same grid.
inline ComparisonReport compare_to_masses(const EmpiricalDensity& e, const ExactBinMasses& exact) {
  require(e.total > 0, "cannot compare an empty histogram (zero samples in the grid)");
  require(exact.mass.size() == e.counts.size(), "exact masses and histogram use different grids");
  Rational total(0);
  for (const auto& m : exact.mass) total += m;
  require(sgn(total) > 0, "the exact density has no mass on the bin grid");

  ComparisonReport r;
  r.samples = e.total;
  r.near_wall = exact.near_wall;
  r.empirical = e.frequencies();
  const double n = static_cast<double>(e.total);
  for (std::size_t b = 0; b < exact.mass.size(); ++b) {
    const double p = Rational(exact.mass[b] / total).get_d();
    r.expected.push_back(p);
    r.tv_distance += 0.5 * std::abs(r.empirical[b] - p);
    const double z = (static_cast<double>(e.counts[b]) - n * p) / std::max(1.0, std::sqrt(n * p * (1 - p)));
    r.z_scores.push_back(z);
    r.max_abs_z = std::max(r.max_abs_z, std::abs(z));
  }
  r.noise_floor = expected_tv_noise(r.expected, e.total);
  return r;
}

inline void check_comparable(const EmpiricalDensity& e, const RootSystem& rs, const Weight& lambda) {
  require(rs.type().factors().size() == 1 && rs.type().factors()[0].family == 'A' && rs.rank() + 1 == e.n,
          "comparison for SU(" + std::to_string(e.n) + ") needs root system A" + std::to_string(e.n - 1) + ", got " +
              rs.type().label());
  require(lambda == e.lambda, "lambda' = " + lambda.str() + " does not match the sampled lambda' = " + e.lambda.str());
}

inline ComparisonReport compare_to_exact(const EmpiricalDensity& e, const RootSystem& rs, const Weight& lambda,
                                         std::size_t q = 4) {
  require(e.total > 0, "cannot compare an empty histogram (zero samples in the grid)");
  check_comparable(e, rs, lambda);
  const DHContext ctx(rs);
  return compare_to_masses(e, exact_bin_masses(ctx, lambda, e.grid, q));
}

// CSV: one row per bin with center coordinates, count and frequency.
inline void write_histogram_csv(std::ostream& os, const EmpiricalDensity& e) {
  for (std::size_t a = 0; a < e.grid.dim(); ++a) os << "c" << (a + 1) << ",";
  os << "count,frequency\n";
  const auto freq = e.frequencies();
  const auto old = os.precision(12);
  for (std::size_t b = 0; b < e.counts.size(); ++b) {
    for (double c : e.grid.center(b)) os << c << ",";
    os << e.counts[b] << "," << freq[b] << "\n";
  }
  os.precision(old);
}

}  // namespace orbitdh

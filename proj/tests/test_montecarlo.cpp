#include "orbitdh/orbit_montecarlo.hpp"

#include <gtest/gtest.h>

#include <set>
#include <sstream>

namespace orbitdh {
namespace {

bool equal(const ComplexMatrix& a, const ComplexMatrix& b) { return a == b; }

bool anti_hermitian(const ComplexMatrix& a) {
  const auto adj = adjoint(a);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if (adj[i][j] != -a[i][j]) return false;
  return true;
}

TEST(ChevalleyTest, SU2) {
  const auto triples = build_chevalley(2);
  ASSERT_EQ(triples.size(), 1u);
  const auto& t = triples[0];
  ComplexMatrix h = complex_zero(2);
  h[0][0] = 1;
  h[1][1] = -1;
  EXPECT_TRUE(equal(commutator(t.x, t.y), h));
  EXPECT_TRUE(equal(t.h, h));
}

TEST(ChevalleyTest, CommutationRelationsAreExact) {
  for (std::size_t n : {2u, 3u}) {
    const auto triples = build_chevalley(n);
    EXPECT_EQ(triples.size(), n * (n - 1) / 2);
    for (const auto& t : triples) {
      EXPECT_TRUE(equal(commutator(t.h, t.x), Complex(2) * t.x));
      EXPECT_TRUE(equal(commutator(t.h, t.y), Complex(-2) * t.y));
      EXPECT_TRUE(equal(commutator(t.x, t.y), t.h));
      EXPECT_TRUE(anti_hermitian(t.u));
      EXPECT_TRUE(anti_hermitian(t.v));
      // alpha(H_alpha) = 2: the (i,i) - (j,j) entries of H_alpha
      EXPECT_EQ(t.h[t.i][t.i] - t.h[t.j][t.j], Complex(2));
    }
  }
}

TEST(ChevalleyTest, CartanIntegersFromCommutators) {
  const auto triples = build_chevalley(3);
  const auto rs = build_root_system("A2");
  // [H_{alpha_i}, X_{alpha_j}] = a_ji X_{alpha_j}
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      const auto& hi = triples[rs.simple_root_index(i)].h;
      const auto& xj = triples[rs.simple_root_index(j)].x;
      EXPECT_TRUE(equal(commutator(hi, xj), Complex(static_cast<double>(rs.cartan_matrix()[j][i])) * xj));
    }
  EXPECT_TRUE(equal(commutator(triples[rs.simple_root_index(0)].h, triples[rs.simple_root_index(1)].x),
                    Complex(-1) * triples[rs.simple_root_index(1)].x));
}

TEST(ChevalleyTest, RejectsUnsupportedRank) {
  EXPECT_THROW(build_chevalley(1), ValidationError);
  EXPECT_THROW(build_chevalley(4), ValidationError);
}

TEST(EmbedTest, Examples) {
  EXPECT_EQ(embed_lambda(2, Weight{1}), (RationalVector{make_rational(1, 2), make_rational(-1, 2)}));
  EXPECT_EQ(embed_lambda(3, Weight{1, 1}), (RationalVector{make_rational(1), make_rational(0), make_rational(-1)}));
  EXPECT_THROW(embed_lambda(2, Weight{0}), ValidationError);
  EXPECT_THROW(embed_lambda(3, Weight{1, 0}), ValidationError);
  EXPECT_THROW(embed_lambda(3, Weight{1}), ValidationError);
}

TEST(EmbedTest, TracePairingReproducesLambda) {
  const auto rs = build_root_system("A2");
  const auto triples = build_chevalley(3);
  for (const Weight& lambda : {Weight{1, 1}, Weight{2, 5}, Weight({make_rational(1, 3), make_rational(7, 2)})}) {
    for (const Rational scale : {Rational(1), Rational(2), make_rational(2, 3)}) {
      const auto diag = embed_lambda(3, lambda, scale);
      EXPECT_EQ(diag[0] + diag[1] + diag[2], 0);
      EXPECT_GT(diag[0], diag[1]);
      EXPECT_GT(diag[1], diag[2]);
      for (std::size_t a = 0; a < triples.size(); ++a) {
        const auto& t = triples[a];
        EXPECT_EQ(scale * (diag[t.i] - diag[t.j]), rs.pair(lambda, a));
      }
    }
  }
}

TEST(EmbedTest, FixedPointsProjectToWeylOrbit) {
  for (const auto& [n, lambda] : {std::pair<std::size_t, Weight>{2, Weight{3}}, {3, Weight{1, 1}}, {3, Weight{2, 1}}}) {
    const auto rs = build_root_system("A" + std::to_string(n - 1));
    const auto wg = generate(rs);
    std::set<Weight> orbit;
    for (const auto& w : wg.elements()) orbit.insert(act(w, lambda));
    const auto images = fixed_point_images(n, lambda);
    EXPECT_EQ(std::set<Weight>(images.begin(), images.end()), orbit);
    EXPECT_EQ(images.size(), wg.order());
  }
}

TEST(HaarTest, SamplesAreSpecialUnitary) {
  for (std::size_t n : {2u, 3u}) {
    for (std::uint64_t i = 0; i < 200; ++i) {
      std::mt19937_64 engine(detail::sample_seed(99, i));
      const auto g = detail::haar_special_unitary(n, engine);
      const auto gg = g * adjoint(g);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) EXPECT_NEAR(std::abs(gg[r][c] - Complex(r == c ? 1 : 0)), 0, 1e-12);
      const Complex det = n == 2 ? g[0][0] * g[1][1] - g[0][1] * g[1][0]
                                 : g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) -
                                       g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0]) +
                                       g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
      EXPECT_NEAR(std::abs(det - Complex(1)), 0, 1e-12);
    }
  }
}

OrbitSampleConfig config(std::size_t n, Weight lambda, std::uint64_t samples, std::size_t bins, std::uint64_t seed) {
  const auto rs = build_root_system("A" + std::to_string(n - 1));
  OrbitSampleConfig cfg;
  cfg.n = n;
  cfg.grid = hull_bounding_grid(rs, lambda, bins);
  cfg.lambda = std::move(lambda);
  cfg.sample_count = samples;
  cfg.seed = seed;
  cfg.threads = 1;
  return cfg;
}

TEST(SampleTest, BoundingGrid) {
  const auto g = hull_bounding_grid(build_root_system("A2"), Weight{1, 1}, 30);
  EXPECT_EQ(g.lo, (RationalVector{Rational(-2), Rational(-2)}));
  EXPECT_EQ(g.hi, (RationalVector{Rational(2), Rational(2)}));
  EXPECT_EQ(g.size(), 900u);
  const auto g1 = hull_bounding_grid(build_root_system("A1"), Weight{1}, 20);
  EXPECT_EQ(g1.lo, (RationalVector{Rational(-1)}));
  EXPECT_EQ(g1.hi, (RationalVector{Rational(1)}));
}

TEST(SampleTest, SU2PushforwardIsUniform) {
  const std::uint64_t n = 200000;
  const auto e = sample_pushforward(config(2, Weight{1}, n, 20, 5));
  EXPECT_EQ(e.total, n);
  EXPECT_EQ(e.outside, 0u);
  const double p = 1.0 / 20, sigma = std::sqrt(n * p * (1 - p));
  for (auto c : e.counts) EXPECT_LT(std::abs(static_cast<double>(c) - n * p), 4 * sigma);
  double sum = 0;
  for (double f : e.frequencies()) sum += f;
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(SampleTest, DeterministicAcrossThreadCounts) {
  auto cfg = config(3, Weight{2, 1}, 30000, 16, 1234);
  const auto one = sample_pushforward(cfg);
  cfg.threads = 3;
  const auto three = sample_pushforward(cfg);
  cfg.threads = 7;
  const auto seven = sample_pushforward(cfg);
  EXPECT_EQ(one.counts, three.counts);
  EXPECT_EQ(one.counts, seven.counts);
  cfg.seed = 1235;
  EXPECT_NE(sample_pushforward(cfg).counts, one.counts);
}

TEST(SampleTest, SupportStaysInsideTheHull) {
  const Weight lambda{2, 1};
  const auto rs = build_root_system("A2");
  const DHContext ctx(rs);
  const auto e = sample_pushforward(config(3, lambda, 50000, 24, 77));
  EXPECT_EQ(e.outside, 0u);
  for (std::size_t b = 0; b < e.counts.size(); ++b) {
    if (e.counts[b] == 0) continue;
    // some corner of the bin grown by one bin width lies in the hull
    const auto idx = e.grid.unflatten(b);
    bool near = false;
    for (int di = -1; di <= 2 && !near; ++di)
      for (int dj = -1; dj <= 2 && !near; ++dj) {
        const Weight corner({e.grid.lo[0] + e.grid.width(0) * Rational(static_cast<long>(idx[0]) + di),
                             e.grid.lo[1] + e.grid.width(1) * Rational(static_cast<long>(idx[1]) + dj)});
        near = ctx.hull_position(lambda, corner) != HullPosition::exterior;
      }
    EXPECT_TRUE(near) << "bin " << b;
  }
}

double tv(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d / 2;
}

TEST(SampleTest, HistogramIsWeylSymmetric) {
  const auto rs = build_root_system("A2");
  const auto wg = generate(rs);
  const std::uint64_t n = 100000;
  const auto base = sample_pushforward(config(3, Weight{1, 1}, n, 12, 3));
  const auto freq = base.frequencies();
  const double floor = std::sqrt(2.0) * expected_tv_noise(freq, n);
  for (std::size_t i = 0; i < rs.rank(); ++i) {
    auto cfg = config(3, Weight{1, 1}, n, 12, 4 + i);
    cfg.transform = wg.simple_reflection(i).action;
    const auto reflected = sample_pushforward(cfg);
    EXPECT_EQ(reflected.outside, 0u);
    EXPECT_LT(tv(freq, reflected.frequencies()), 3 * floor) << "reflection " << i;
  }
}

TEST(SampleTest, NormalizationIndependence) {
  auto cfg = config(3, Weight{2, 1}, 40000, 20, 21);
  const auto base = sample_pushforward(cfg);
  cfg.form_scale = 2;
  EXPECT_EQ(sample_pushforward(cfg).counts, base.counts);
  cfg.form_scale = make_rational(3, 7);
  const auto scaled = sample_pushforward(cfg);
  std::uint64_t moved = 0;
  for (std::size_t b = 0; b < base.counts.size(); ++b)
    moved += base.counts[b] > scaled.counts[b] ? base.counts[b] - scaled.counts[b] : 0;
  EXPECT_LE(moved, 40u);  // only rounding at bin edges
}

TEST(CompareTest, ExactMassesSU2AreUniform) {
  const auto rs = build_root_system("A1");
  const DHContext ctx(rs);
  const auto masses = exact_bin_masses(ctx, Weight{1}, hull_bounding_grid(rs, Weight{1}, 20));
  for (const auto& m : masses.mass) EXPECT_EQ(m, make_rational(1, 10));
  // only the bins touching the ends of the segment can see the jump to zero
  for (std::size_t b = 1; b + 1 < masses.near_wall.size(); ++b) EXPECT_FALSE(masses.near_wall[b]);
}

TEST(CompareTest, ExactMassesSU3Symmetries) {
  const auto rs = build_root_system("A2");
  const DHContext ctx(rs);
  const std::size_t bins = 10;
  const auto m = exact_bin_masses(ctx, Weight{1, 1}, hull_bounding_grid(rs, Weight{1, 1}, bins));
  Rational total(0);
  for (std::size_t i = 0; i < bins; ++i)
    for (std::size_t j = 0; j < bins; ++j) {
      total += m.mass[i * bins + j];
      EXPECT_EQ(m.mass[i * bins + j], m.mass[j * bins + i]);                            // c1 <-> c2
      EXPECT_EQ(m.mass[i * bins + j], m.mass[(bins - 1 - i) * bins + (bins - 1 - j)]);  // mu -> -mu
    }
  EXPECT_GT(total, 0);
  // bins far outside the hexagon carry no mass
  EXPECT_EQ(m.mass[0], 0);
  EXPECT_EQ(m.mass[bins * bins - 1], 0);
}

TEST(CompareTest, SU3AgreesWithExactDensity) {
  const auto rs = build_root_system("A2");
  const auto e = sample_pushforward(config(3, Weight{1, 1}, 100000, 12, 8));
  const auto r = compare_to_exact(e, rs, Weight{1, 1});
  EXPECT_EQ(r.samples, 100000u);
  EXPECT_LT(r.tv_distance, 3 * r.noise_floor);
  double sum = 0;
  for (double p : r.expected) sum += p;
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(CompareTest, Rejections) {
  const auto rs = build_root_system("A2");
  const auto e = sample_pushforward(config(3, Weight{1, 1}, 1000, 6, 8));
  EXPECT_THROW(compare_to_exact(e, rs, Weight{2, 1}), ValidationError);
  EXPECT_THROW(compare_to_exact(e, build_root_system("B2"), Weight{1, 1}), ValidationError);
  EmpiricalDensity empty = e;
  empty.total = 0;
  std::fill(empty.counts.begin(), empty.counts.end(), 0);
  EXPECT_THROW(compare_to_exact(empty, rs, Weight{1, 1}), ValidationError);

  auto cfg = config(3, Weight{1, 1}, 0, 6, 8);
  EXPECT_THROW(sample_pushforward(cfg), ValidationError);
  cfg.sample_count = 10;
  cfg.lambda = Weight{1, 0};
  EXPECT_THROW(sample_pushforward(cfg), ValidationError);
}

TEST(CompareTest, HistogramCsv) {
  const auto e = sample_pushforward(config(3, Weight{1, 1}, 500, 5, 1));
  std::ostringstream os;
  write_histogram_csv(os, e);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "c1,c2,count,frequency");
  std::size_t rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 25u);
}

}  // namespace
}  // namespace orbitdh

#include "orbitdh/kostant_partition.hpp"

#include <gtest/gtest.h>

#include <thread>

#include "oracles.hpp"

namespace orbitdh {
namespace {

TEST(PartitionCountTest, Examples) {
  for (const char* label : {"A1", "A2", "B2", "G2", "A3"}) {
    const auto rs = build_root_system(label);
    EXPECT_EQ(partition_count(rs, RootVector::zero(rs.rank())), 1) << label;
  }
  const auto a2 = build_root_system("A2");
  EXPECT_EQ(partition_count(a2, RootVector{1, 1}), 2);
  EXPECT_EQ(partition_count(a2, RootVector{1, -1}), 0);
  EXPECT_EQ(partition_count(a2, RootVector{2, 1}), 2);
}

TEST(PartitionCountTest, RejectsNonIntegralArguments) {
  const auto a2 = build_root_system("A2");
  EXPECT_THROW(partition_count(a2, RootVector({make_rational(1, 2), make_rational(1)})), ValidationError);
  EXPECT_THROW(partition_count(a2, RootVector{1, 1, 1}), ValidationError);
}

TEST(PartitionCountTest, OracleValuesForA2) {
  // frozen from brute_force_partitions
  const auto a2 = build_root_system("A2");
  EXPECT_EQ(oracle::brute_force_partitions(a2.positive_roots(), {1, 1}), 2);
  EXPECT_EQ(oracle::brute_force_partitions(a2.positive_roots(), {2, 1}), 2);
}

class PartitionBox : public ::testing::TestWithParam<std::string> {};

TEST_P(PartitionBox, MatchesBruteForceAndRecursion) {
  const auto rs = build_root_system(GetParam());
  ASSERT_EQ(rs.rank(), 2u);
  PartitionTable table(rs);
  auto without_last = rs.positive_roots();
  const auto last = without_last.back();
  without_last.pop_back();
  PartitionTable reduced(without_last, 2);
  for (std::int64_t a = 0; a <= 5; ++a)
    for (std::int64_t b = 0; b <= 5; ++b) {
      const BigInt p = table.at({a, b});
      EXPECT_EQ(p, oracle::brute_force_partitions(rs.positive_roots(), {a, b})) << a << "," << b;
      BigInt rec = 0;
      for (std::int64_t k = 0; a - k * last[0] >= 0 && b - k * last[1] >= 0; ++k)
        rec += reduced.at({a - k * last[0], b - k * last[1]});
      EXPECT_EQ(p, rec);
    }
  // support: negative coordinates give zero
  for (std::int64_t a = -3; a <= 3; ++a) EXPECT_EQ(table.at({a, -1}), 0);
}

INSTANTIATE_TEST_SUITE_P(Rank2, PartitionBox, ::testing::Values("A2", "B2", "G2"));

TEST(PartitionCountTest, A2ClosedForm) {
  const auto a2 = build_root_system("A2");
  for (std::int64_t m = 0; m <= 6; ++m)
    for (std::int64_t n = 0; n <= 6; ++n)
      ASSERT_EQ(oracle::brute_force_partitions(a2.positive_roots(), {m, n}), std::min(m, n) + 1);
  PartitionTable table(a2);
  for (std::int64_t m = 0; m <= 120; m += 7)
    for (std::int64_t n = 0; n <= 120; n += 5) EXPECT_EQ(table.at({m, n}), std::min(m, n) + 1);
}

TEST(PartitionCountTest, RankThreeMatchesBruteForce) {
  for (const char* label : {"A3", "B3", "C3"}) {
    const auto rs = build_root_system(label);
    PartitionTable table(rs);
    for (std::int64_t a = 0; a <= 3; ++a)
      for (std::int64_t b = 0; b <= 3; ++b)
        for (std::int64_t c = 0; c <= 3; ++c)
          EXPECT_EQ(table.at({a, b, c}), oracle::brute_force_partitions(rs.positive_roots(), {a, b, c}));
  }
}

TEST(PartitionCountTest, GrowingTableIsConsistent) {
  const auto b2 = build_root_system("B2");
  PartitionTable small(b2), big(b2);
  big.reserve({40, 40});
  for (std::int64_t k = 0; k <= 40; k += 3) EXPECT_EQ(small.at({k, k}), big.at({k, k}));
}

TEST(PartitionCountTest, ConcurrentQueriesAgree) {
  const auto b2 = build_root_system("B2");
  PartitionTable shared(b2);
  std::vector<std::vector<BigInt>> results(4);
  std::vector<std::thread> workers;
  for (int t = 0; t < 4; ++t)
    workers.emplace_back([&, t] {
      for (std::int64_t k = 0; k < 30; ++k) results[t].push_back(shared.at({(k * (t + 1)) % 37, k}));
    });
  for (auto& w : workers) w.join();
  for (int t = 0; t < 4; ++t) {
    PartitionTable fresh(b2);
    for (std::int64_t k = 0; k < 30; ++k) EXPECT_EQ(results[t][k], fresh.at({(k * (t + 1)) % 37, k}));
  }
}

}  // namespace
}  // namespace orbitdh

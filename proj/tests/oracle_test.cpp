#include "latdens/density.hpp"
#include "latdens/errors.hpp"
#include "latdens/oracle.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace latdens;
using namespace latdens::testing;

namespace {

std::vector<BigInt> as_big(std::initializer_list<int> v) {
  std::vector<BigInt> out;
  for (int x : v) out.emplace_back(x);
  return out;
}

// Counts X mod 2^N with XᵀGX ≡ G by visiting every matrix.
std::uint64_t naive_count(const Matrix<std::int64_t>& g, int level) {
  const std::size_t n = g.rows();
  const std::int64_t mod = std::int64_t{1} << level;
  const std::size_t slots = n * n;
  std::uint64_t total = 1;
  for (std::size_t s = 0; s < slots; ++s) total *= static_cast<std::uint64_t>(mod);
  std::uint64_t hits = 0;
  std::vector<std::int64_t> x(slots);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t t = idx;
    for (std::size_t s = 0; s < slots; ++s) {
      x[s] = static_cast<std::int64_t>(t % static_cast<std::uint64_t>(mod));
      t /= static_cast<std::uint64_t>(mod);
    }
    bool ok = true;
    for (std::size_t j = 0; j < n && ok; ++j)
      for (std::size_t l = j; l < n && ok; ++l) {
        std::int64_t acc = 0;
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t c = 0; c < n; ++c) acc += x[r * n + j] * g(r, c) * x[c * n + l];
        ok = ((acc - g(j, l)) % mod + mod) % mod == 0;
      }
    if (ok) ++hits;
  }
  return hits;
}

}  // namespace

TEST(CountSolutions, RankOne) {
  EXPECT_EQ(count_levels(OracleProblem::from_integers({{1}}, 2), 5), as_big({1, 2, 4, 4, 4}));
  EXPECT_EQ(count_levels(OracleProblem::from_integers({{1}}, 3), 4), as_big({2, 2, 2, 2}));
}

TEST(CountSolutions, IdentityOfRankTwo) {
  EXPECT_EQ(count_solutions(OracleProblem::from_integers(identity_int(2), 2), 5), 256);
}

TEST(CountSolutions, MatchesNaiveEnumeration) {
  for (std::int64_t a : {1, 2, 3, 4, 5, 6, 12}) {
    const Matrix<std::int64_t> g{{a}};
    const auto counts = count_levels(OracleProblem::from_integers(g, 2), 8);
    for (int k = 1; k <= 8; ++k) EXPECT_EQ(counts[k - 1], naive_count(g, k)) << "a=" << a << " k=" << k;
  }
  const std::vector<Matrix<std::int64_t>> rank_two = {
      {{1, 0}, {0, 1}}, {{0, 1}, {1, 0}}, {{2, 1}, {1, 2}}, {{1, 0}, {0, 2}}, {{1, 0}, {0, 4}}, {{2, 0}, {0, 3}},
      {{1, 1}, {1, 3}}};
  for (const auto& g : rank_two) {
    const auto counts = count_levels(OracleProblem::from_integers(g, 2), 4);
    for (int k = 1; k <= 4; ++k) EXPECT_EQ(counts[k - 1], naive_count(g, k));
  }
  EXPECT_EQ(count_solutions(OracleProblem::from_integers(identity_int(2), 2), 5), naive_count(identity_int(2), 5));
}

TEST(CountSolutions, ScheduleIndependent) {
  const OracleProblem p = OracleProblem::from_integers({{1, 0}, {0, 2}}, 2);
  const auto base = count_levels(p, 7);
  for (int depth : {1, 2, 3, 5}) {
    for (int jobs : {1, 2, 4}) {
      OracleOptions o;
      o.split_depth = depth;
      o.jobs = jobs;
      EXPECT_EQ(count_levels(p, 7, o), base);
    }
  }
}

TEST(CountSolutions, BudgetGuard) {
  EXPECT_THROW(check_oracle_budget(OracleProblem::from_integers(identity_int(5), 2), 4), BudgetExceeded);
  EXPECT_THROW(check_oracle_budget(OracleProblem::from_integers({{1}}, 2), 9), BudgetExceeded);
  EXPECT_THROW(check_oracle_budget(OracleProblem::from_integers(identity_int(4), 3), 3), BudgetExceeded);
  OracleOptions tiny;
  tiny.node_budget = 10;
  EXPECT_THROW(count_levels(OracleProblem::from_integers(identity_int(2), 2), 6, tiny), BudgetExceeded);
  EXPECT_THROW(count_levels(OracleProblem::from_integers({{1, 2}, {0, 1}}, 2), 3), InvalidInput);
}

TEST(DensityEstimate, MatchesEngine) {
  const RingDescriptor& ring = RingDescriptor::get(1, 24);
  for (const auto& g : std::vector<Matrix<std::int64_t>>{{{1}}, {{1, 0}, {0, 1}}, {{1, 0}, {0, 2}}}) {
    const auto r = density_estimate(OracleProblem::from_integers(g, 2), 8);
    ASSERT_TRUE(r.stabilized);
    EXPECT_EQ(r.value, 2 * local_density(QuadLattice::from_integers(ring, g)));
    for (const auto& c : r.ratios) {
      const BigInt d = den(c);
      EXPECT_EQ(d & (d - 1), 0);
    }
  }
}

TEST(DensityEstimate, UnramifiedQuadraticExtension) {
  OracleProblem p;
  p.degree = 2;
  p.gram = Matrix<std::vector<std::int64_t>>{{{1, 0}}};
  const auto r = density_estimate(p, 6);
  ASSERT_TRUE(r.stabilized);
  EXPECT_EQ(r.counts[3], 8);
  EXPECT_EQ(r.value, 2 * local_density(identity_lattice(1, 2)));
}

TEST(DensityEstimate, ReportsMissingPlateau) {
  const auto r = density_estimate(OracleProblem::from_integers({{1, 0}, {0, 4}}, 2), 5);
  EXPECT_FALSE(r.stabilized);
  EXPECT_EQ(r.first_admissible_level, 6);
  EXPECT_THROW(stabilized_value(r), NotStabilized);
}

TEST(DensityEstimate, OddPrime) {
  const auto r = density_estimate(OracleProblem::from_integers({{1, 0}, {0, 3}}, 3), 6);
  ASSERT_TRUE(r.stabilized);
  EXPECT_EQ(r.value, 12);
}

TEST(BruteIsometry, Examples) {
  EXPECT_FALSE(brute_isometry({{3}}, {{1}}, 3).transform);
  EXPECT_TRUE(brute_isometry({{3}}, {{1}}, 1).transform);
  const auto id = brute_isometry(identity_int(2), identity_int(2), 4);
  ASSERT_TRUE(id.transform);
  const auto& t = *id.transform;
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t l = 0; l < 2; ++l) {
      const std::int64_t v = t(0, j) * t(0, l) + t(1, j) * t(1, l);
      EXPECT_EQ(((v - (j == l ? 1 : 0)) % 16 + 16) % 16, 0);
    }
  EXPECT_FALSE(brute_isometry({{0, 1}, {1, 0}}, {{2, 1}, {1, 2}}, 2).transform);
  EXPECT_FALSE(brute_isometry({{0, 1}, {1, 0}}, {{2, 1}, {1, 2}}, 3).transform);
  EXPECT_THROW(brute_isometry(identity_int(4), identity_int(4), 2), BudgetExceeded);
}

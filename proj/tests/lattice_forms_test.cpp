#include "latdens/errors.hpp"
#include "latdens/lattice.hpp"
#include "latdens/normal_form.hpp"
#include "latdens/oracle.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace latdens;
using namespace latdens::testing;

namespace {

std::vector<std::tuple<int, std::size_t, Parity>> shape(const JordanSymbol& s) {
  std::vector<std::tuple<int, std::size_t, Parity>> out;
  for (const auto& c : s.constituents) out.emplace_back(c.scale, c.rank(), c.parity);
  return out;
}

void expect_reconstruction(const QuadLattice& l, const JordanSymbol& s) {
  // Absolute precision is counted from the smallest scale present.
  const int offset = std::min(0, s.constituents.front().scale);
  const RingMatrix lhs = ring_congruence(l.gram(), s.basis);
  EXPECT_TRUE(agree_mod(lhs, block_assembly(s), l.ring().precision() - 4 + offset));
}

Matrix<std::int64_t> to_int_mod(const RingMatrix& m, int bits) {
  Matrix<std::int64_t> out(m.rows(), m.cols(), 0);
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      out(r, c) = m(r, c).is_zero() ? 0 : static_cast<std::int64_t>(m(r, c).residue_mod_pow2(bits)[0]);
  return out;
}

}  // namespace

TEST(Ideals, NormIdeal) {
  EXPECT_EQ(norm_ideal(int_lattice({{1, 0}, {0, 2}})), 0);
  EXPECT_EQ(norm_ideal(int_lattice({{0, 1}, {1, 0}})), 1);
  EXPECT_EQ(norm_ideal(int_lattice({{2, 1}, {1, 2}})), 1);
}

TEST(Ideals, ScaleIdeal) {
  EXPECT_EQ(scale_ideal(int_lattice({{1, 0}, {0, 2}})), 0);
  EXPECT_EQ(scale_ideal(int_lattice({{0, 1}, {1, 0}})), 0);
  EXPECT_EQ(scale_ideal(int_lattice({{4, 0}, {0, 8}})), 2);
}

TEST(Ideals, Discriminant) {
  auto d = discriminant(int_lattice({{1, 0}, {0, 1}}));
  EXPECT_EQ(d.valuation, 0);
  EXPECT_EQ(d.unit_mod8[0], 1u);
  d = discriminant(int_lattice({{0, 1}, {1, 0}}));
  EXPECT_EQ(d.valuation, 0);
  EXPECT_EQ(d.unit_mod8[0], 7u);
  d = discriminant(int_lattice({{1, 0}, {0, 2}}));
  EXPECT_EQ(d.valuation, 1);
  EXPECT_EQ(d.unit_mod8[0], 1u);
}

TEST(Jordan, AlreadySplit) {
  const QuadLattice l = int_lattice({{1, 0, 0}, {0, 2, 0}, {0, 0, 4}});
  const JordanSymbol s = jordan_split(l);
  EXPECT_EQ(shape(s), (std::vector<std::tuple<int, std::size_t, Parity>>{
                          {0, 1, Parity::I}, {1, 1, Parity::I}, {2, 1, Parity::I}}));
  expect_reconstruction(l, s);
}

TEST(Jordan, EvenUnimodularPlane) {
  const JordanSymbol s = jordan_split(int_lattice({{2, 1}, {1, 2}}));
  EXPECT_EQ(shape(s), (std::vector<std::tuple<int, std::size_t, Parity>>{{0, 2, Parity::II}}));
}

TEST(Jordan, OneEliminationStep) {
  const QuadLattice l = int_lattice({{1, 1, 0}, {1, 2, 0}, {0, 0, 4}});
  const JordanSymbol s = jordan_split(l);
  ASSERT_EQ(s.constituents.size(), 2u);
  EXPECT_EQ(s.constituents[0].scale, 0);
  EXPECT_EQ(s.constituents[0].rank(), 2u);
  EXPECT_EQ(s.constituents[1].scale, 2);
  EXPECT_EQ(s.constituents[1].rank(), 1u);
  expect_reconstruction(l, s);
}

TEST(Jordan, HalfIntegralScale) {
  const RingDescriptor& ring = RingDescriptor::get(1, 24);
  Matrix<Rational> g{{Rational(1, 2), Rational(1)}, {Rational(1), Rational(3)}};
  const QuadLattice l(ring, ring_matrix(ring, g));
  const JordanSymbol s = jordan_split(l);
  EXPECT_EQ(s.constituents.front().scale, -1);
  expect_reconstruction(l, s);
}

TEST(Jordan, DegenerateInputIsRejected) {
  EXPECT_THROW(jordan_split(int_lattice({{1, 1}, {1, 1}})), PrecisionExhausted);
}

TEST(Jordan, AsymmetricInputIsRejected) {
  EXPECT_THROW(int_lattice({{1, 2}, {0, 1}}), InvalidInput);
}

TEST(Jordan, ReconstructionAndInvarianceOnRandomLattices) {
  LatticeSampler sampler(99);
  for (int t = 0; t < 150; ++t) {
    const int f = sampler.uniform(1, 2);
    const RingDescriptor& ring = RingDescriptor::get(f, 40);
    const auto n = static_cast<std::size_t>(sampler.uniform(1, 6));
    const QuadLattice l(ring, sampler.random_jordan_gram(ring, n, -1, 3));
    const QuadLattice moved = l.transformed(sampler.random_unimodular(ring, n));
    const JordanSymbol a = jordan_split(l);
    const JordanSymbol b = jordan_split(moved);
    EXPECT_EQ(shape(a), shape(b));
    expect_reconstruction(moved, b);
    for (const auto& c : b.constituents) EXPECT_TRUE(is_unimodular(c.unimodular));
  }
}

TEST(Parity, Classification) {
  const RingDescriptor& ring = RingDescriptor::get(1, 24);
  EXPECT_EQ(parity_type(int_gram(ring, {{1}})), Parity::I);
  EXPECT_EQ(parity_type(int_gram(ring, {{0, 1}, {1, 0}})), Parity::II);
  EXPECT_EQ(parity_type(int_gram(ring, {{2, 1}, {1, 2}})), Parity::II);
}

TEST(NormalForm, RankOneUnit) {
  const RingDescriptor& ring = RingDescriptor::get(1, 24);
  const UnimodularProfile p = unimodular_normal_form(int_gram(ring, {{3}}));
  EXPECT_EQ(p.parity, Parity::I);
  ASSERT_TRUE(p.kprime_epsilon);
  EXPECT_TRUE(p.kprime_epsilon->is_unit());
  EXPECT_EQ(p.kprime_epsilon->residue_mod_pow2(3)[0], 3u);
  EXPECT_FALSE(p.k_lambda);
  EXPECT_EQ(p.hyperbolic_planes, 0u);
}

TEST(NormalForm, HyperbolicPlaneIsFixed) {
  const RingDescriptor& ring = RingDescriptor::get(1, 24);
  const UnimodularProfile p = unimodular_normal_form(int_gram(ring, {{0, 1}, {1, 0}}));
  EXPECT_EQ(p.parity, Parity::II);
  EXPECT_FALSE(p.k_lambda);
  EXPECT_FALSE(p.kprime_epsilon);
  // The last plane is reported as the terminal block; here it is A(0, 0).
  ASSERT_TRUE(p.terminal);
  EXPECT_TRUE(p.terminal->first.is_zero());
  EXPECT_TRUE(p.terminal->second.is_zero());
}

TEST(NormalForm, IdentityOfRankThree) {
  const RingDescriptor& ring = RingDescriptor::get(1, 24);
  const RingMatrix u = ring_identity(ring, 3);
  const UnimodularProfile p = unimodular_normal_form(u);
  ASSERT_TRUE(p.k_lambda);
  ASSERT_TRUE(p.kprime_epsilon);
  EXPECT_GE(p.k_lambda->valuation_bound(), 1);
  EXPECT_TRUE(agree_mod(ring_congruence(u, p.witness), p.assembled, 20));
  const auto found = brute_isometry(identity_int(3), to_int_mod(p.assembled, 4), 4);
  EXPECT_TRUE(found.transform.has_value());
}

TEST(NormalForm, WitnessReproducesAssemblyOnRandomBlocks) {
  LatticeSampler sampler(5);
  for (int t = 0; t < 100; ++t) {
    const int f = sampler.uniform(1, 2);
    const RingDescriptor& ring = RingDescriptor::get(f, 40);
    const auto n = static_cast<std::size_t>(sampler.uniform(1, 6));
    const RingMatrix u = sampler.random_jordan_gram(ring, n, 0, 0);
    const RingMatrix moved = ring_congruence(u, sampler.random_unimodular(ring, n));
    const UnimodularProfile p = unimodular_normal_form(moved);
    EXPECT_EQ(p.parity, parity_type(moved));
    EXPECT_EQ(p.rank, n);
    EXPECT_TRUE(agree_mod(ring_congruence(moved, p.witness), p.assembled, 24));
    if (p.parity == Parity::II) {
      EXPECT_EQ(n % 2, 0u);
      EXPECT_FALSE(p.kprime_epsilon);
    }
    if (p.kprime_epsilon) EXPECT_TRUE(p.kprime_epsilon->is_unit());
    if (f == 1) {
      const auto d0 = discriminant(QuadLattice(ring, moved));
      const auto d1 = discriminant(QuadLattice(ring, p.assembled));
      EXPECT_EQ(d0.unit_mod8, d1.unit_mod8);
    }
  }
}

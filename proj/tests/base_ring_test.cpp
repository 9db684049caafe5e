#include "latdens/base_ring.hpp"
#include "latdens/errors.hpp"
#include "latdens/kappa_forms.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace latdens;
using namespace latdens::testing;

namespace {

const RingDescriptor& z2() { return RingDescriptor::get(1, 24); }
const RingDescriptor& a4() { return RingDescriptor::get(2, 24); }
RingElem w() { return RingElem::from_coordinates(a4(), {Rational(0), Rational(1)}); }
KappaElem kw() { return KappaElem(a4().residue_field(), 0b10); }

}  // namespace

TEST(RingArithmetic, ProductAddsScales) {
  const RingElem x = RingElem::from_int(z2(), 3) * RingElem::from_int(z2(), 4);
  EXPECT_EQ(x.valuation(), 2);
  EXPECT_EQ(x.unit()[0], 3u);
}

TEST(RingArithmetic, InverseOfThree) {
  const RingElem third = RingElem::from_int(z2(), 1) / RingElem::from_int(z2(), 3);
  EXPECT_TRUE(third.is_unit());
  EXPECT_EQ(RingElem::from_int(z2(), 3) * third, RingElem::from_int(z2(), 1));
  EXPECT_EQ(third.relative_precision(), 24);
}

TEST(RingArithmetic, GeneratorSquaredInQuadraticExtension) {
  const RingElem sq = w() * w();
  EXPECT_EQ(sq.valuation(), 0);
  EXPECT_EQ(sq.residue().bits(), 0b11u);
  EXPECT_EQ(sq, RingElem::from_int(a4(), -1) - w());
}

TEST(RingArithmetic, Valuations) {
  EXPECT_EQ(RingElem::from_int(z2(), 12).valuation(), 2);
  EXPECT_FALSE(RingElem::zero(z2()).valuation().has_value());
  EXPECT_EQ((RingElem::from_int(a4(), 2) * w()).valuation(), 1);
  EXPECT_THROW(RingElem::inexact_zero(z2(), 5).valuation(), PrecisionExhausted);
}

TEST(RingArithmetic, Residues) {
  EXPECT_EQ(RingElem::from_int(z2(), 5).residue().bits(), 1u);
  EXPECT_EQ(RingElem::from_int(z2(), 4).residue().bits(), 0u);
  EXPECT_EQ((w() + RingElem::from_int(a4(), 2)).residue().bits(), 0b10u);
  EXPECT_THROW(RingElem::from_rational(z2(), Rational(1, 2)).residue(), NegativeValuation);
}

TEST(RingArithmetic, DivisionByZero) {
  EXPECT_THROW(RingElem::from_int(z2(), 1) / RingElem::zero(z2()), DivisionByZero);
  EXPECT_THROW(RingElem::from_int(z2(), 1) / RingElem::inexact_zero(z2(), 4), PrecisionExhausted);
}

TEST(RingArithmetic, RationalsWithOddDenominators) {
  const RingElem x = RingElem::from_rational(z2(), Rational(5, 12));
  EXPECT_EQ(x.valuation(), -2);
  EXPECT_EQ(x * RingElem::from_int(z2(), 12), RingElem::from_int(z2(), 5));
}

TEST(RingArithmetic, PrecisionTracksCancellation) {
  const RingElem a = RingElem::from_int(z2(), 1 + (1 << 10));
  const RingElem d = a - RingElem::from_int(z2(), 1);
  EXPECT_EQ(d.valuation(), 10);
  EXPECT_EQ(d.relative_precision(), 14);
}

TEST(RingArithmetic, FieldAxiomsOnRandomElements) {
  LatticeSampler s(7);
  for (const RingDescriptor* ring : {&z2(), &a4(), &RingDescriptor::get(3, 30)}) {
    for (int t = 0; t < 200; ++t) {
      const RingElem a = s.random_integer(*ring, 50);
      const RingElem b = s.random_integer(*ring, 50);
      const RingElem c = s.random_integer(*ring, 50);
      EXPECT_EQ(a * (b + c), a * b + a * c);
      EXPECT_EQ((a * b) * c, a * (b * c));
      EXPECT_EQ(a + b - b, a);
      if (!a.is_zero()) EXPECT_EQ(a * a.inverse(), RingElem::from_int(*ring, 1));
    }
  }
}

TEST(ResidueField, SquareRootAndTrace) {
  EXPECT_EQ(kappa_sqrt(KappaElem::one(a4().residue_field())).bits(), 1u);
  EXPECT_EQ(kappa_sqrt(kw()).bits(), 0b11u);
  EXPECT_EQ(kappa_sqrt(KappaElem::zero(a4().residue_field())).bits(), 0u);
  EXPECT_EQ(kappa_trace(kw()), 1);
  EXPECT_EQ((kw() * kw().inverse()).bits(), 1u);
  for (std::uint32_t x = 0; x < 256; ++x) {
    const KappaElem e(RingDescriptor::get(8, 24).residue_field(), x);
    EXPECT_EQ(kappa_sqrt(e).square(), e);
  }
}

TEST(ResidueField, UnitSquareRootsModTwo) {
  EXPECT_EQ(unit_sqrt_mod2(RingElem::from_int(z2(), 3)).residue().bits(), 1u);
  EXPECT_EQ(unit_sqrt_mod2(RingElem::from_int(z2(), 1)).residue().bits(), 1u);
  EXPECT_EQ(unit_sqrt_mod2(w()).residue().bits(), 0b11u);
}

TEST(KappaLinearAlgebra, KernelAndSolutions) {
  const ResidueField& f2 = z2().residue_field();
  const KappaElem one = KappaElem::one(f2);
  const KappaElem zero = KappaElem::zero(f2);
  auto sol = kappa_linear_solve(Matrix<KappaElem>{{one, one}}, {zero});
  ASSERT_EQ(sol.kernel.size(), 1u);
  EXPECT_EQ(sol.kernel[0], (KVec{one, one}));

  sol = kappa_linear_solve(Matrix<KappaElem>{{one, zero}, {zero, one}}, {one, zero});
  ASSERT_TRUE(sol.particular);
  EXPECT_TRUE(sol.kernel.empty());
  EXPECT_EQ(*sol.particular, (KVec{one, zero}));

  const auto ext = kappa_linear_solve(Matrix<KappaElem>{{kw()}}, {KappaElem::one(a4().residue_field())});
  ASSERT_TRUE(ext.particular);
  EXPECT_EQ((*ext.particular)[0].bits(), 0b11u);

  const auto none = kappa_linear_solve(Matrix<KappaElem>{{one, one}, {one, one}}, {one, zero});
  EXPECT_FALSE(none.particular);
}

TEST(KappaLinearAlgebra, AdditiveFormKernels) {
  const ResidueField& f2 = z2().residue_field();
  const KappaElem one = KappaElem::one(f2);
  const KappaElem zero = KappaElem::zero(f2);
  auto k = additive_form_kernel(f2, {one, zero});
  ASSERT_EQ(k.size(), 1u);
  EXPECT_EQ(k[0], (KVec{zero, one}));
  k = additive_form_kernel(f2, {one, one});
  ASSERT_EQ(k.size(), 1u);
  EXPECT_EQ(k[0], (KVec{one, one}));

  const ResidueField& f4 = a4().residue_field();
  k = additive_form_kernel(f4, {kw(), KappaElem::one(f4)});
  ASSERT_EQ(k.size(), 1u);
  // Normalize to first coordinate one.
  const KappaElem scale = k[0][0].inverse();
  EXPECT_EQ((k[0][1] * scale).bits(), kappa_sqrt(kw()).bits());
}

TEST(KappaForms, ArfClassification) {
  const ResidueField& f2 = z2().residue_field();
  const KappaElem one = KappaElem::one(f2);
  const KappaElem zero = KappaElem::zero(f2);
  const Matrix<KappaElem> polar{{zero, one}, {one, zero}};
  const auto hyperbolic = make_kappa_form(f2, {zero, zero}, polar);
  const auto anisotropic = make_kappa_form(f2, {one, one}, polar);
  EXPECT_EQ(arf_class(hyperbolic), OrthogonalClass::Split);
  EXPECT_EQ(arf_class(anisotropic), OrthogonalClass::Nonsplit);
  EXPECT_EQ(count_zeros(hyperbolic), 3u);
  EXPECT_EQ(count_zeros(anisotropic), 1u);
  EXPECT_FALSE(find_isotropic(anisotropic));
  ASSERT_TRUE(find_isotropic(hyperbolic));

  const ResidueField& f4 = a4().residue_field();
  const KappaElem o4 = KappaElem::one(f4);
  const KappaElem z4 = KappaElem::zero(f4);
  const auto q = make_kappa_form(f4, {o4, kw()}, Matrix<KappaElem>{{z4, o4}, {o4, z4}});
  EXPECT_EQ(arf_class(q), OrthogonalClass::Nonsplit);
  EXPECT_EQ(count_zeros(q), 1u);  // split planes over F_4 have 7 zeros
  EXPECT_THROW(arf_class(make_kappa_form(f2, {one}, Matrix<KappaElem>{{zero}})), OddDimension);
}

TEST(KappaForms, ArfAgreesWithZeroCountOnRandomForms) {
  std::mt19937_64 rng(3);
  for (int degree : {1, 2}) {
    const ResidueField& f = RingDescriptor::get(degree, 24).residue_field();
    const std::uint32_t size = f.cardinality();
    for (int t = 0; t < 200; ++t) {
      const std::size_t m = 1 + rng() % 2;
      const std::size_t dim = 2 * m;
      KVec diag;
      Matrix<KappaElem> polar(dim, dim, KappaElem::zero(f));
      for (std::size_t i = 0; i < dim; ++i) diag.emplace_back(f, rng() % size);
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i + 1; j < dim; ++j) polar(i, j) = polar(j, i) = KappaElem(f, rng() % size);
      const auto q = make_kappa_form(f, diag, polar);
      if (!is_nonsingular(q) || !polar_radical(q).empty()) continue;
      // Zeros including the origin: q^{2m−1} + q^m − q^{m−1} for the split class.
      const std::uint64_t qm = 1ull << (degree * m);
      const std::uint64_t qq = 1ull << degree;
      const std::uint64_t zeros = count_zeros(q);
      const std::uint64_t expect_split = qm * qm / qq + qm - qm / qq;
      EXPECT_EQ(arf_class(q) == OrthogonalClass::Split, zeros == expect_split);
    }
  }
}

TEST(Rationals, ParsingAndPrinting) {
  EXPECT_EQ(parse_rational("3/2^4"), Rational(3, 16));
  EXPECT_EQ(parse_rational(" -7 "), Rational(-7));
  EXPECT_EQ(to_string(Rational(4)), "4/1");
  EXPECT_EQ(to_string(Rational(-6, 4)), "-3/2");
  EXPECT_THROW(parse_rational("1/0"), InvalidInput);
  EXPECT_THROW(parse_rational("x"), InvalidInput);
  EXPECT_EQ(valuation(Rational(12, 5), BigInt(2)), 2);
}

TEST(ResidueField, LiftIsASectionOfResidue) {
  const ResidueField& f4 = a4().residue_field();
  for (std::uint32_t x = 0; x < 4; ++x) EXPECT_EQ(RingElem::lift(a4(), KappaElem(f4, x)).residue().bits(), x);
  EXPECT_EQ(RingElem::lift(a4(), kw()), w());
}

#pragma once

#include "latdens/rational.hpp"
#include "latdens/residue_field.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

namespace latdens {

// The ring A of integers of the unramified extension of Q_2 of degree f, truncated at relative precision 2^K.
// Descriptors are interned; compare them by address.
class RingDescriptor {
 public:
  static constexpr int kMinPrecision = 10;
  static constexpr int kMaxPrecision = 62;

  // modulus lists c_0..c_{f-1} of the monic polynomial x^f + Σ c_i x^i; empty selects the default.
  static const RingDescriptor& get(int degree, int precision, const std::vector<std::int64_t>& modulus = {});
  // Default moduli: lifts of Conway polynomials over F_2.
  static std::vector<std::int64_t> default_modulus(int degree);

  int degree() const { return degree_; }
  int precision() const { return precision_; }
  const std::vector<std::int64_t>& modulus() const { return modulus_; }
  const ResidueField& residue_field() const { return *field_; }
  // |κ| = 2^f.
  std::uint64_t residue_cardinality() const { return std::uint64_t{1} << degree_; }

 private:
  RingDescriptor(int degree, int precision, std::vector<std::int64_t> modulus);

  int degree_;
  int precision_;
  std::vector<std::int64_t> modulus_;
  const ResidueField* field_;
};

// Element 2^e·u of the fraction field with u a unit known modulo 2^r, an inexact zero known to vanish
// modulo 2^a, or the exact zero.
class RingElem {
 public:
  static constexpr int kMaxDegree = 8;
  static constexpr int kExactPrecision = 1 << 29;
  using Coeffs = std::array<std::uint64_t, kMaxDegree>;

  // Exact zero not yet attached to a ring; arithmetic adopts the other operand's ring.
  RingElem() = default;

  static RingElem zero(const RingDescriptor& ring);
  static RingElem inexact_zero(const RingDescriptor& ring, int absolute_precision);
  static RingElem from_int(const RingDescriptor& ring, std::int64_t value);
  static RingElem from_rational(const RingDescriptor& ring, const Rational& value);
  // Element Σ c_i w^i in the power basis of the modulus.
  static RingElem from_coordinates(const RingDescriptor& ring, const std::vector<Rational>& coords);
  // Teichmüller-free lift: residue bits become 0/1 coefficients.
  static RingElem lift(const RingDescriptor& ring, const KappaElem& x);
  // 2^scale·Σ coeffs_i w^i with coefficients known modulo 2^rel; normalizes non-units.
  static RingElem from_coeffs(const RingDescriptor& ring, int scale, const Coeffs& coeffs, int rel);

  const RingDescriptor* ring() const { return ring_; }
  bool is_exact_zero() const { return kind_ == Kind::ExactZero; }
  // True for exact zeros and for values indistinguishable from zero at their precision.
  bool is_zero() const { return kind_ != Kind::Nonzero; }
  bool is_unit() const { return kind_ == Kind::Nonzero && scale_ == 0; }

  // nullopt for the exact zero; throws PrecisionExhausted for an inexact zero.
  std::optional<int> valuation() const;
  // Lower bound on the valuation: scale, precision for inexact zeros, kExactPrecision for exact zero.
  int valuation_bound() const;
  int scale() const { return scale_; }
  int relative_precision() const { return kind_ == Kind::Nonzero ? rel_ : 0; }
  int absolute_precision() const;
  const Coeffs& unit() const { return unit_; }

  RingElem operator+(const RingElem& o) const;
  RingElem operator-(const RingElem& o) const;
  RingElem operator-() const;
  RingElem operator*(const RingElem& o) const;
  RingElem operator/(const RingElem& o) const;
  RingElem& operator+=(const RingElem& o) { return *this = *this + o; }
  RingElem& operator-=(const RingElem& o) { return *this = *this - o; }
  RingElem& operator*=(const RingElem& o) { return *this = *this * o; }
  RingElem inverse() const;
  // Multiplication by 2^k.
  RingElem shifted(int k) const;
  // Forget everything beyond absolute precision a.
  RingElem truncated(int absolute_precision) const;

  // Agreement modulo 2^min(absolute precisions).
  bool operator==(const RingElem& o) const { return (*this - o).is_zero(); }

  KappaElem residue() const;
  // Coordinates of the value modulo 2^bits as integers in [0, 2^bits); requires valuation ≥ 0 and enough precision.
  std::vector<std::uint64_t> residue_mod_pow2(int bits) const;
  // Exact rational coordinates of the stored representative (symmetric unit digits).
  std::vector<Rational> to_coordinates() const;

 private:
  enum class Kind : std::uint8_t { ExactZero, InexactZero, Nonzero };
  static RingElem normalize(const RingDescriptor& ring, int scale, Coeffs coeffs, int width);
  static Coeffs unit_inverse(const RingDescriptor& ring, const Coeffs& u, int rel);

  const RingDescriptor* ring_ = nullptr;
  Kind kind_ = Kind::ExactZero;
  int scale_ = 0;  // absolute precision for inexact zeros
  int rel_ = 0;
  Coeffs unit_{};
};

// v with v² ≡ u mod 2 for a unit u.
RingElem unit_sqrt_mod2(const RingElem& u);

std::ostream& operator<<(std::ostream& os, const RingElem& x);

// Product of polynomials in w modulo the ring modulus, coefficients modulo 2^64.
RingElem::Coeffs ring_poly_mul(const RingDescriptor& ring, const RingElem::Coeffs& a, const RingElem::Coeffs& b);

}  // namespace latdens

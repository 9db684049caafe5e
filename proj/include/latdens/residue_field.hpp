#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

namespace latdens {

// The finite field F_{2^f} presented as F_2[x]/(m(x)). Instances are interned and never destroyed.
class ResidueField {
 public:
  static constexpr int kMaxDegree = 8;

  // modulus_bits has bit i set when x^i appears; bit f must be the leading term.
  static const ResidueField& get(int degree, std::uint32_t modulus_bits);
  static const ResidueField& prime_field();

  int degree() const { return degree_; }
  std::uint32_t modulus_bits() const { return modulus_; }
  std::uint32_t cardinality() const { return 1u << degree_; }

  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const { return mul_[(a << degree_) | b]; }
  std::uint32_t inv(std::uint32_t a) const;
  std::uint32_t sqrt(std::uint32_t a) const { return sqrt_[a]; }
  std::uint32_t trace(std::uint32_t a) const { return trace_[a]; }

 private:
  ResidueField(int degree, std::uint32_t modulus_bits);

  int degree_;
  std::uint32_t modulus_;
  std::vector<std::uint32_t> mul_;
  std::vector<std::uint32_t> inv_;
  std::vector<std::uint32_t> sqrt_;
  std::vector<std::uint32_t> trace_;
};

// Carry-less product of two polynomials over F_2 reduced modulo a polynomial.
std::uint32_t gf2_mulmod(std::uint32_t a, std::uint32_t b, std::uint32_t modulus, int degree);
bool gf2_irreducible(std::uint32_t poly, int degree);

// Element of a ResidueField.
class KappaElem {
 public:
  KappaElem() : field_(&ResidueField::prime_field()), bits_(0) {}
  KappaElem(const ResidueField& field, std::uint32_t bits) : field_(&field), bits_(bits) {}

  static KappaElem zero(const ResidueField& field) { return {field, 0}; }
  static KappaElem one(const ResidueField& field) { return {field, 1}; }

  const ResidueField& field() const { return *field_; }
  std::uint32_t bits() const { return bits_; }
  bool is_zero() const { return bits_ == 0; }
  bool is_one() const { return bits_ == 1; }

  KappaElem operator+(const KappaElem& o) const { return {*field_, bits_ ^ o.bits_}; }
  KappaElem operator-(const KappaElem& o) const { return {*field_, bits_ ^ o.bits_}; }
  KappaElem operator-() const { return *this; }
  KappaElem operator*(const KappaElem& o) const { return {*field_, field_->mul(bits_, o.bits_)}; }
  KappaElem operator/(const KappaElem& o) const;
  KappaElem inverse() const;
  KappaElem square() const { return *this * *this; }
  KappaElem pow(std::uint64_t e) const;
  bool operator==(const KappaElem& o) const { return bits_ == o.bits_; }
  bool operator!=(const KappaElem& o) const { return bits_ != o.bits_; }

 private:
  const ResidueField* field_;
  std::uint32_t bits_;
};

// Square root in a perfect field of characteristic 2, computed as x^(2^(f-1)).
KappaElem kappa_sqrt(const KappaElem& x);
// Absolute trace to F_2, returned as 0 or 1.
int kappa_trace(const KappaElem& x);

std::ostream& operator<<(std::ostream& os, const KappaElem& x);

// Element of F_p for an odd prime p.
class PrimeElem {
 public:
  PrimeElem() = default;
  PrimeElem(std::uint64_t value, std::uint64_t p) : v_(value % p), p_(p) {}

  std::uint64_t value() const { return v_; }
  std::uint64_t prime() const { return p_; }
  bool is_zero() const { return v_ == 0; }

  PrimeElem operator+(const PrimeElem& o) const { return {v_ + o.v_, p_}; }
  PrimeElem operator-(const PrimeElem& o) const { return {v_ + p_ - o.v_, p_}; }
  PrimeElem operator-() const { return {p_ - v_, p_}; }
  PrimeElem operator*(const PrimeElem& o) const {
    return {static_cast<std::uint64_t>(static_cast<unsigned __int128>(v_) * o.v_ % p_), p_};
  }
  PrimeElem operator/(const PrimeElem& o) const { return *this * o.inverse(); }
  PrimeElem inverse() const;
  bool operator==(const PrimeElem& o) const { return v_ == o.v_; }

 private:
  std::uint64_t v_ = 0;
  std::uint64_t p_ = 2;
};

}  // namespace latdens

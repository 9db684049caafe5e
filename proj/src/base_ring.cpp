#include "latdens/base_ring.hpp"

#include "latdens/errors.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <limits>
#include <mutex>
#include <string>

namespace latdens {
namespace {

std::uint64_t low_mask(int bits) { return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1; }

std::uint32_t modulus_bits_mod2(const std::vector<std::int64_t>& modulus) {
  std::uint32_t bits = 1u << modulus.size();
  for (std::size_t i = 0; i < modulus.size(); ++i)
    if (modulus[i] & 1) bits |= 1u << i;
  return bits;
}

// 2-adic inverse of an odd 64-bit integer.
std::uint64_t odd_inverse(std::uint64_t a) {
  std::uint64_t x = a;  // correct to 3 bits
  for (int i = 0; i < 6; ++i) x *= 2 - a * x;
  return x;
}

// Low 64 bits of a nonnegative or negative big integer (two's complement).
std::uint64_t low_bits(const BigInt& n) {
  const BigInt m = mod_floor(n, BigInt(1) << 64);
  return static_cast<std::uint64_t>(m);
}

struct TwoAdic {
  int valuation;
  std::uint64_t unit;  // modulo 2^64
};

TwoAdic two_adic(const Rational& r) {
  BigInt n = num(r);
  BigInt d = den(r);
  const int vn = static_cast<int>(boost::multiprecision::lsb(abs(n)));
  const int vd = static_cast<int>(boost::multiprecision::lsb(d));
  n >>= vn;
  d >>= vd;
  return {vn - vd, low_bits(n) * odd_inverse(low_bits(d))};
}

}  // namespace

RingDescriptor::RingDescriptor(int degree, int precision, std::vector<std::int64_t> modulus)
    : degree_(degree), precision_(precision), modulus_(std::move(modulus)),
      field_(&ResidueField::get(degree, modulus_bits_mod2(modulus_))) {}

std::vector<std::int64_t> RingDescriptor::default_modulus(int degree) {
  switch (degree) {
    case 1: return {1};
    case 2: return {1, 1};
    case 3: return {1, 1, 0};
    case 4: return {1, 1, 0, 0};
    case 5: return {1, 0, 1, 0, 0};
    case 6: return {1, 1, 0, 1, 1, 0};
    case 7: return {1, 1, 0, 0, 0, 0, 0};
    case 8: return {1, 0, 1, 1, 1, 0, 0, 0};
    default: throw InvalidInput("residue degree must be between 1 and 8");
  }
}

const RingDescriptor& RingDescriptor::get(int degree, int precision, const std::vector<std::int64_t>& modulus) {
  static std::mutex mutex;
  static std::deque<RingDescriptor> registry;
  if (degree < 1 || degree > RingElem::kMaxDegree) throw InvalidInput("residue degree must be between 1 and 8");
  if (precision < kMinPrecision || precision > kMaxPrecision)
    throw InvalidInput("precision must be between " + std::to_string(kMinPrecision) + " and " +
                       std::to_string(kMaxPrecision));
  std::vector<std::int64_t> m = modulus.empty() ? default_modulus(degree) : modulus;
  if (static_cast<int>(m.size()) != degree) throw InvalidInput("modulus must list exactly f lower coefficients");
  std::lock_guard<std::mutex> lock(mutex);
  for (const auto& r : registry)
    if (r.degree_ == degree && r.precision_ == precision && r.modulus_ == m) return r;
  registry.push_back(RingDescriptor(degree, precision, std::move(m)));
  return registry.back();
}

RingElem::Coeffs ring_poly_mul(const RingDescriptor& ring, const RingElem::Coeffs& a, const RingElem::Coeffs& b) {
  const int f = ring.degree();
  std::array<std::uint64_t, 2 * RingElem::kMaxDegree> prod{};
  for (int i = 0; i < f; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < f; ++j) prod[i + j] += a[i] * b[j];
  }
  const auto& m = ring.modulus();
  for (int d = 2 * f - 2; d >= f; --d) {
    const std::uint64_t t = prod[d];
    if (t == 0) continue;
    prod[d] = 0;
    for (int i = 0; i < f; ++i) prod[d - f + i] -= t * static_cast<std::uint64_t>(m[i]);
  }
  RingElem::Coeffs out{};
  std::copy_n(prod.begin(), f, out.begin());
  return out;
}

RingElem RingElem::zero(const RingDescriptor& ring) {
  RingElem z;
  z.ring_ = &ring;
  return z;
}

RingElem RingElem::inexact_zero(const RingDescriptor& ring, int absolute_precision) {
  RingElem z;
  z.ring_ = &ring;
  z.kind_ = Kind::InexactZero;
  z.scale_ = absolute_precision;
  return z;
}

RingElem RingElem::normalize(const RingDescriptor& ring, int scale, Coeffs coeffs, int width) {
  const int f = ring.degree();
  const std::uint64_t mask = low_mask(width);
  int tz = width;
  for (int i = 0; i < f; ++i) {
    coeffs[i] &= mask;
    if (coeffs[i]) tz = std::min(tz, std::countr_zero(coeffs[i]));
  }
  if (tz >= width) return inexact_zero(ring, scale + width);
  RingElem out;
  out.ring_ = &ring;
  out.kind_ = Kind::Nonzero;
  out.scale_ = scale + tz;
  out.rel_ = width - tz;
  for (int i = 0; i < f; ++i) out.unit_[i] = coeffs[i] >> tz;
  return out;
}

RingElem RingElem::from_coeffs(const RingDescriptor& ring, int scale, const Coeffs& coeffs, int rel) {
  return normalize(ring, scale, coeffs, std::min(rel, ring.precision()));
}

RingElem RingElem::from_int(const RingDescriptor& ring, std::int64_t value) {
  return from_rational(ring, Rational(value));
}

RingElem RingElem::from_rational(const RingDescriptor& ring, const Rational& value) {
  if (value == 0) return zero(ring);
  const TwoAdic t = two_adic(value);
  Coeffs c{};
  c[0] = t.unit;
  return normalize(ring, t.valuation, c, ring.precision());
}

RingElem RingElem::from_coordinates(const RingDescriptor& ring, const std::vector<Rational>& coords) {
  if (static_cast<int>(coords.size()) != ring.degree())
    throw InvalidInput("coordinate array length must equal the residue degree");
  int e = std::numeric_limits<int>::max();
  std::vector<TwoAdic> parts(coords.size(), TwoAdic{0, 0});
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] == 0) continue;
    parts[i] = two_adic(coords[i]);
    e = std::min(e, parts[i].valuation);
  }
  if (e == std::numeric_limits<int>::max()) return zero(ring);
  Coeffs c{};
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] == 0) continue;
    const int shift = parts[i].valuation - e;
    c[i] = shift >= 64 ? 0 : parts[i].unit << shift;
  }
  return normalize(ring, e, c, ring.precision());
}

RingElem RingElem::lift(const RingDescriptor& ring, const KappaElem& x) {
  if (x.is_zero()) return zero(ring);
  Coeffs c{};
  for (int i = 0; i < ring.degree(); ++i) c[i] = (x.bits() >> i) & 1u;
  return normalize(ring, 0, c, ring.precision());
}

std::optional<int> RingElem::valuation() const {
  switch (kind_) {
    case Kind::ExactZero: return std::nullopt;
    case Kind::InexactZero:
      throw PrecisionExhausted("valuation of a value that vanishes at working precision");
    case Kind::Nonzero: return scale_;
  }
  return std::nullopt;
}

int RingElem::valuation_bound() const {
  switch (kind_) {
    case Kind::ExactZero: return kExactPrecision;
    case Kind::InexactZero: return scale_;
    case Kind::Nonzero: return scale_;
  }
  return 0;
}

int RingElem::absolute_precision() const {
  switch (kind_) {
    case Kind::ExactZero: return kExactPrecision;
    case Kind::InexactZero: return scale_;
    case Kind::Nonzero: return scale_ + rel_;
  }
  return 0;
}

RingElem RingElem::truncated(int absolute_precision) const {
  if (absolute_precision >= this->absolute_precision()) return *this;
  if (kind_ != Kind::Nonzero || scale_ >= absolute_precision) return inexact_zero(*ring_, absolute_precision);
  return normalize(*ring_, scale_, unit_, absolute_precision - scale_);
}

RingElem RingElem::operator+(const RingElem& o) const {
  if (kind_ == Kind::ExactZero) return o.ring_ || !ring_ ? o : zero(*ring_);
  if (o.kind_ == Kind::ExactZero) return *this;
  const RingDescriptor& ring = *ring_;
  const int abs = std::min(absolute_precision(), o.absolute_precision());
  if (kind_ == Kind::InexactZero) return o.truncated(abs);
  if (o.kind_ == Kind::InexactZero) return truncated(abs);
  const int e = std::min(scale_, o.scale_);
  const int width = abs - e;
  const int sa = scale_ - e;
  const int sb = o.scale_ - e;
  Coeffs c{};
  for (int i = 0; i < ring.degree(); ++i) {
    const std::uint64_t a = sa >= 64 ? 0 : unit_[i] << sa;
    const std::uint64_t b = sb >= 64 ? 0 : o.unit_[i] << sb;
    c[i] = a + b;
  }
  return normalize(ring, e, c, width);
}

RingElem RingElem::operator-() const {
  if (kind_ != Kind::Nonzero) return *this;
  Coeffs c{};
  for (int i = 0; i < ring_->degree(); ++i) c[i] = ~unit_[i] + 1;
  return normalize(*ring_, scale_, c, rel_);
}

RingElem RingElem::operator-(const RingElem& o) const { return *this + (-o); }

RingElem RingElem::operator*(const RingElem& o) const {
  if (kind_ == Kind::ExactZero) return ring_ || !o.ring_ ? *this : zero(*o.ring_);
  if (o.kind_ == Kind::ExactZero) return ring_ ? zero(*ring_) : o;
  const RingDescriptor& ring = *ring_;
  if (kind_ == Kind::InexactZero || o.kind_ == Kind::InexactZero)
    return inexact_zero(ring, valuation_bound() + o.valuation_bound());
  RingElem out;
  out.ring_ = &ring;
  out.kind_ = Kind::Nonzero;
  out.scale_ = scale_ + o.scale_;
  out.rel_ = std::min(rel_, o.rel_);
  const Coeffs prod = ring_poly_mul(ring, unit_, o.unit_);
  const std::uint64_t mask = low_mask(out.rel_);
  for (int i = 0; i < ring.degree(); ++i) out.unit_[i] = prod[i] & mask;
  return out;
}

RingElem::Coeffs RingElem::unit_inverse(const RingDescriptor& ring, const Coeffs& u, int rel) {
  const ResidueField& field = ring.residue_field();
  std::uint32_t bits = 0;
  for (int i = 0; i < ring.degree(); ++i)
    if (u[i] & 1u) bits |= 1u << i;
  const std::uint32_t inv = field.inv(bits);
  Coeffs x{};
  for (int i = 0; i < ring.degree(); ++i) x[i] = (inv >> i) & 1u;
  // Newton: x ← x(2 − ux) doubles the number of correct bits.
  for (int correct = 1; correct < rel; correct *= 2) {
    Coeffs ux = ring_poly_mul(ring, u, x);
    Coeffs t{};
    for (int i = 0; i < ring.degree(); ++i) t[i] = (i == 0 ? 2 : 0) - ux[i];
    x = ring_poly_mul(ring, x, t);
  }
  const std::uint64_t mask = low_mask(rel);
  for (int i = 0; i < ring.degree(); ++i) x[i] &= mask;
  return x;
}

RingElem RingElem::inverse() const {
  if (kind_ == Kind::ExactZero) throw DivisionByZero("division by exact zero");
  if (kind_ == Kind::InexactZero) throw PrecisionExhausted("division by a value that vanishes at working precision");
  RingElem out = *this;
  out.scale_ = -scale_;
  out.unit_ = unit_inverse(*ring_, unit_, rel_);
  return out;
}

RingElem RingElem::operator/(const RingElem& o) const {
  if (o.kind_ == Kind::ExactZero) throw DivisionByZero("division by exact zero");
  if (o.kind_ == Kind::InexactZero)
    throw PrecisionExhausted("division by a value that vanishes at working precision");
  if (kind_ == Kind::ExactZero) return zero(*o.ring_);
  if (kind_ == Kind::InexactZero) return inexact_zero(*ring_, scale_ - o.scale_);
  return *this * o.inverse();
}

RingElem RingElem::shifted(int k) const {
  if (kind_ == Kind::ExactZero) return *this;
  RingElem out = *this;
  out.scale_ += k;
  return out;
}

KappaElem RingElem::residue() const {
  if (!ring_) return KappaElem();
  const ResidueField& field = ring_->residue_field();
  switch (kind_) {
    case Kind::ExactZero: return KappaElem::zero(field);
    case Kind::InexactZero:
      if (scale_ >= 1) return KappaElem::zero(field);
      throw PrecisionExhausted("residue of a value below working precision");
    case Kind::Nonzero: break;
  }
  if (scale_ < 0) throw NegativeValuation("residue of an element of negative valuation");
  if (scale_ > 0) return KappaElem::zero(field);
  std::uint32_t bits = 0;
  for (int i = 0; i < ring_->degree(); ++i)
    if (unit_[i] & 1u) bits |= 1u << i;
  return {field, bits};
}

std::vector<std::uint64_t> RingElem::residue_mod_pow2(int bits) const {
  const int f = ring_ ? ring_->degree() : 1;
  std::vector<std::uint64_t> out(f, 0);
  if (kind_ == Kind::ExactZero) return out;
  if (absolute_precision() < bits) throw PrecisionExhausted("value not known to the requested 2-adic precision");
  if (kind_ == Kind::InexactZero) return out;
  if (scale_ < 0) throw NegativeValuation("reduction of an element of negative valuation");
  const std::uint64_t mask = low_mask(bits);
  for (int i = 0; i < f; ++i) out[i] = scale_ >= 64 ? 0 : (unit_[i] << scale_) & mask;
  return out;
}

std::vector<Rational> RingElem::to_coordinates() const {
  const int f = ring_ ? ring_->degree() : 1;
  std::vector<Rational> out(f, Rational(0));
  if (kind_ != Kind::Nonzero) return out;
  const BigInt modulus = BigInt(1) << rel_;
  for (int i = 0; i < f; ++i) {
    BigInt c = unit_[i];
    if (c * 2 > modulus) c -= modulus;
    out[i] = scale_ >= 0 ? Rational(c << scale_) : Rational(c, BigInt(1) << -scale_);
  }
  return out;
}

RingElem unit_sqrt_mod2(const RingElem& u) {
  if (!u.is_unit()) throw NotAUnit("square root modulo 2 requires a unit");
  return RingElem::lift(*u.ring(), kappa_sqrt(u.residue()));
}

std::ostream& operator<<(std::ostream& os, const RingElem& x) {
  if (x.is_exact_zero()) return os << "0";
  if (x.is_zero()) return os << "O(2^" << x.absolute_precision() << ")";
  const auto coords = x.to_coordinates();
  if (coords.size() == 1) return os << to_string(coords[0]) << " + O(2^" << x.absolute_precision() << ")";
  os << "[";
  for (std::size_t i = 0; i < coords.size(); ++i) os << (i ? ", " : "") << to_string(coords[i]);
  return os << "] + O(2^" << x.absolute_precision() << ")";
}

}  // namespace latdens

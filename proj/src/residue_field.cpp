#include "latdens/residue_field.hpp"

#include "latdens/errors.hpp"

#include <deque>
#include <mutex>
#include <string>

namespace latdens {

std::uint32_t gf2_mulmod(std::uint32_t a, std::uint32_t b, std::uint32_t modulus, int degree) {
  std::uint64_t prod = 0;
  for (int i = 0; i < 32; ++i)
    if ((b >> i) & 1u) prod ^= static_cast<std::uint64_t>(a) << i;
  for (int d = 63; d >= degree; --d)
    if ((prod >> d) & 1u) prod ^= static_cast<std::uint64_t>(modulus) << (d - degree);
  return static_cast<std::uint32_t>(prod);
}

bool gf2_irreducible(std::uint32_t poly, int degree) {
  if (degree < 1 || ((poly >> degree) & 1u) == 0 || (poly >> (degree + 1)) != 0) return false;
  // Trial division by every polynomial of degree 1..degree/2.
  for (int d = 1; 2 * d <= degree; ++d) {
    for (std::uint32_t g = 1u << d; g < (2u << d); ++g) {
      std::uint32_t r = poly;
      for (int k = degree; k >= d; --k)
        if ((r >> k) & 1u) r ^= g << (k - d);
      if (r == 0) return false;
    }
  }
  return true;
}

ResidueField::ResidueField(int degree, std::uint32_t modulus_bits) : degree_(degree), modulus_(modulus_bits) {
  const std::uint32_t q = 1u << degree;
  mul_.resize(static_cast<std::size_t>(q) * q);
  for (std::uint32_t a = 0; a < q; ++a)
    for (std::uint32_t b = 0; b < q; ++b) mul_[(a << degree) | b] = gf2_mulmod(a, b, modulus_bits, degree);
  inv_.assign(q, 0);
  for (std::uint32_t a = 1; a < q; ++a)
    for (std::uint32_t b = 1; b < q; ++b)
      if (mul(a, b) == 1) {
        inv_[a] = b;
        break;
      }
  sqrt_.assign(q, 0);
  for (std::uint32_t a = 0; a < q; ++a) sqrt_[mul(a, a)] = a;
  trace_.assign(q, 0);
  for (std::uint32_t a = 0; a < q; ++a) {
    std::uint32_t t = 0;
    std::uint32_t x = a;
    for (int i = 0; i < degree; ++i) {
      t ^= x;
      x = mul(x, x);
    }
    trace_[a] = t;
  }
}

const ResidueField& ResidueField::get(int degree, std::uint32_t modulus_bits) {
  static std::mutex mutex;
  static std::deque<ResidueField> registry;
  if (degree < 1 || degree > kMaxDegree) throw InvalidInput("residue degree must be between 1 and 8");
  if (!gf2_irreducible(modulus_bits, degree))
    throw InvalidInput("modulus is not irreducible of degree " + std::to_string(degree) + " over F_2");
  std::lock_guard<std::mutex> lock(mutex);
  for (const auto& f : registry)
    if (f.degree_ == degree && f.modulus_ == modulus_bits) return f;
  registry.push_back(ResidueField(degree, modulus_bits));
  return registry.back();
}

const ResidueField& ResidueField::prime_field() {
  static const ResidueField& f2 = get(1, 0b11);
  return f2;
}

std::uint32_t ResidueField::inv(std::uint32_t a) const {
  if (a == 0) throw DivisionByZero("inverse of zero in residue field");
  return inv_[a];
}

KappaElem KappaElem::operator/(const KappaElem& o) const { return *this * o.inverse(); }

KappaElem KappaElem::inverse() const { return {*field_, field_->inv(bits_)}; }

KappaElem KappaElem::pow(std::uint64_t e) const {
  KappaElem result = one(*field_);
  KappaElem base = *this;
  while (e) {
    if (e & 1u) result = result * base;
    base = base * base;
    e >>= 1;
  }
  return result;
}

KappaElem kappa_sqrt(const KappaElem& x) { return x.pow(std::uint64_t{1} << (x.field().degree() - 1)); }

int kappa_trace(const KappaElem& x) { return static_cast<int>(x.field().trace(x.bits())); }

std::ostream& operator<<(std::ostream& os, const KappaElem& x) {
  os << "[";
  for (int i = 0; i < x.field().degree(); ++i) os << (i ? "," : "") << ((x.bits() >> i) & 1u);
  return os << "]";
}

PrimeElem PrimeElem::inverse() const {
  if (v_ == 0) throw DivisionByZero("inverse of zero in prime field");
  std::uint64_t result = 1;
  std::uint64_t base = v_;
  std::uint64_t e = p_ - 2;
  while (e) {
    if (e & 1u) result = static_cast<std::uint64_t>(static_cast<unsigned __int128>(result) * base % p_);
    base = static_cast<std::uint64_t>(static_cast<unsigned __int128>(base) * base % p_);
    e >>= 1;
  }
  return {result, p_};
}

}  // namespace latdens

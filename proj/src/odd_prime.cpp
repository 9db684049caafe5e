#include "latdens/odd_prime.hpp"

#include "latdens/errors.hpp"
#include "latdens/group_orders.hpp"

#include <algorithm>
#include <limits>

namespace latdens {
namespace {

BigInt powmod(BigInt base, BigInt e, const BigInt& m) {
  BigInt result = 1;
  base = mod_floor(base, m);
  while (e > 0) {
    if (e % 2 == 1) result = result * base % m;
    base = base * base % m;
    e /= 2;
  }
  return result;
}

}  // namespace

int legendre(const Rational& a, const BigInt& p) {
  if (valuation(a, p) != 0) throw InvalidInput("Legendre symbol of a non-unit");
  const BigInt r = mod_floor(num(a) * powmod(den(a), p - 2, p), p);
  const BigInt e = powmod(r, (p - 1) / 2, p);
  return e == 1 ? 1 : -1;
}

int kronecker(const BigInt& d, const BigInt& n_in) {
  if (n_in <= 0) throw InvalidInput("Kronecker symbol needs a positive lower argument");
  BigInt n = n_in;
  int result = 1;
  while (n % 2 == 0) {
    n /= 2;
    const BigInt r = mod_floor(d, 8);
    if (r % 2 == 0) return 0;
    if (r == 3 || r == 5) result = -result;
  }
  // Jacobi symbol (d/n) for odd n.
  BigInt a = mod_floor(d, n);
  BigInt m = n;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      const BigInt r = m % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, m);
    if (a % 4 == 3 && m % 4 == 3) result = -result;
    a %= m;
  }
  return m == 1 ? result : 0;
}

OddJordanSymbol odd_jordan(const Matrix<Rational>& gram_in, const BigInt& p) {
  if (p < 3 || p % 2 == 0) throw InvalidInput("odd prime required");
  Matrix<Rational> g = gram_in;
  const std::size_t n = g.rows();
  std::vector<bool> active(n, true);
  std::vector<std::pair<int, Rational>> pivots;
  constexpr int kInf = std::numeric_limits<int>::max();
  for (std::size_t done = 0; done < n; ++done) {
    int best = kInf;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = r; c < n; ++c)
        if (active[r] && active[c] && g(r, c) != 0) best = std::min(best, valuation(g(r, c), p));
    if (best == kInf) throw InvalidInput("Gram matrix is degenerate");
    std::size_t piv = n;
    for (std::size_t r = 0; r < n && piv == n; ++r)
      if (active[r] && g(r, r) != 0 && valuation(g(r, r), p) == best) piv = r;
    if (piv == n) {
      // Only an off-diagonal entry attains the minimum: replace e_r by e_r + e_c.
      for (std::size_t r = 0; r < n && piv == n; ++r)
        for (std::size_t c = r + 1; c < n; ++c)
          if (active[r] && active[c] && g(r, c) != 0 && valuation(g(r, c), p) == best) {
            for (std::size_t k = 0; k < n; ++k) g(r, k) += g(c, k);
            for (std::size_t k = 0; k < n; ++k) g(k, r) += g(k, c);
            piv = r;
            break;
          }
    }
    const Rational d = g(piv, piv);
    active[piv] = false;
    std::vector<Rational> coeff(n, Rational(0));
    for (std::size_t k = 0; k < n; ++k)
      if (active[k]) coeff[k] = g(piv, k) / d;
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k]) continue;
      for (std::size_t l = 0; l < n; ++l)
        if (active[l]) g(k, l) -= coeff[k] * g(piv, l);
    }
    for (std::size_t k = 0; k < n; ++k)
      if (active[k]) g(piv, k) = g(k, piv) = 0;
    pivots.emplace_back(valuation(d, p), d);
  }
  std::sort(pivots.begin(), pivots.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  OddJordanSymbol out;
  out.p = p;
  for (const auto& [s, d] : pivots) {
    const Rational unit = d / rpow(Rational(p), s);
    if (!out.constituents.empty() && out.constituents.back().scale == s) {
      out.constituents.back().rank += 1;
      out.constituents.back().unit_determinant *= unit;
    } else {
      out.constituents.push_back({s, 1, unit});
    }
  }
  return out;
}

Rational odd_prime_density(const OddJordanSymbol& symbol) {
  const BigInt& p = symbol.p;
  long n = 0;
  long np = 0;
  long reductive_dim = 0;
  BigInt orders = 1;
  const auto& cs = symbol.constituents;
  for (std::size_t a = 0; a < cs.size(); ++a) {
    const long ni = static_cast<long>(cs[a].rank);
    n += ni;
    np += cs[a].scale * ni * (ni + 1) / 2;
    for (std::size_t b = a + 1; b < cs.size(); ++b) np += cs[a].scale * ni * static_cast<long>(cs[b].rank);
    reductive_dim += ni * (ni - 1) / 2;
    const int m = static_cast<int>(ni / 2);
    if (ni % 2 == 1) {
      orders *= finite_orthogonal_order(OrthogonalClass::OddDimensional, m, p);
    } else {
      const Rational signed_disc = (m % 2 ? Rational(-1) : Rational(1)) * cs[a].unit_determinant;
      const auto cls = legendre(signed_disc, p) == 1 ? OrthogonalClass::Split : OrthogonalClass::Nonsplit;
      orders *= finite_orthogonal_order(cls, m, p);
    }
  }
  const long dim_g = n * (n - 1) / 2;
  const long dim_ru = dim_g - reductive_dim;
  return rpow(Rational(p), static_cast<int>(np - dim_g + dim_ru)) * Rational(orders) / 2;
}

Rational odd_prime_density(const Matrix<Rational>& gram, const BigInt& p) {
  if (gram.rows() == 0) return 1;
  return odd_prime_density(odd_jordan(gram, p));
}

}  // namespace latdens

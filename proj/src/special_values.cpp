#include "latdens/special_values.hpp"

#include "latdens/errors.hpp"
#include "latdens/odd_prime.hpp"

#include <cmath>
#include <mutex>
#include <vector>

namespace latdens {
namespace {

BigInt binomial(int n, int k) {
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

BigInt factorial(int n) {
  BigInt r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// Cohen–Villegas–Zagier summation of Σ (−1)^k a_k.
template <class Term>
double alternating_sum(Term a, int terms = 60) {
  const double d0 = std::pow(3.0 + std::sqrt(8.0), terms);
  const double d = (d0 + 1.0 / d0) / 2.0;
  double b = -1.0;
  double c = -d;
  double s = 0.0;
  for (int k = 0; k < terms; ++k) {
    c = b - c;
    s += c * a(k);
    b = (k + terms) * (k - terms) * b / ((k + 0.5) * (k + 1.0));
  }
  return s / d;
}

}  // namespace

Rational bernoulli(int k) {
  static std::mutex mutex;
  static std::vector<Rational> cache{Rational(1)};
  if (k < 0) throw InvalidInput("negative Bernoulli index");
  std::lock_guard<std::mutex> lock(mutex);
  while (static_cast<int>(cache.size()) <= k) {
    const int m = static_cast<int>(cache.size());
    Rational acc = 0;
    for (int j = 0; j < m; ++j) acc += Rational(binomial(m + 1, j)) * cache[j];
    cache.push_back(-acc / (m + 1));
  }
  return cache[k];
}

Rational bernoulli_polynomial(int k, const Rational& x) {
  Rational acc = 0;
  for (int j = 0; j <= k; ++j) acc += Rational(binomial(k, j)) * bernoulli(j) * rpow(x, k - j);
  return acc;
}

Rational generalized_bernoulli(int k, const BigInt& d) {
  if (d == 1) return k == 1 ? Rational(1, 2) : bernoulli(k);
  const BigInt f = abs(d);
  Rational acc = 0;
  for (BigInt a = 1; a <= f; ++a) {
    const int chi = kronecker(d, a);
    if (chi == 0) continue;
    acc += chi * bernoulli_polynomial(k, Rational(a, f));
  }
  return acc * rpow(Rational(f), k - 1);
}

Rational zeta_nonpositive(int s) {
  if (s > 0) throw InvalidInput("argument must be nonpositive");
  const int k = -s;
  return (k % 2 ? Rational(-1) : Rational(1)) * bernoulli(k + 1) / (k + 1);
}

Rational dirichlet_l_nonpositive(int s, const BigInt& d) {
  if (s > 0) throw InvalidInput("argument must be nonpositive");
  if (d == 1) return zeta_nonpositive(s);
  const int m = 1 - s;
  return -generalized_bernoulli(m, d) / m;
}

Rational l_chi4_nonpositive(int s) { return dirichlet_l_nonpositive(s, BigInt(-4)); }

Rational zeta_even_over_pi(int k) {
  if (k < 1) throw InvalidInput("index must be positive");
  const Rational sign = k % 2 ? Rational(1) : Rational(-1);
  return sign * bernoulli(2 * k) * Rational(BigInt(1) << (2 * k - 1)) / Rational(factorial(2 * k));
}

Rational dirichlet_l_positive_over_pi(int m, const BigInt& d) {
  if (d == 1) throw InvalidInput("use zeta_even_over_pi for the trivial character");
  const int delta = d < 0 ? 1 : 0;
  if ((m - delta) % 2 != 0) throw InvalidInput("character parity does not match the argument");
  const BigInt f = abs(d);
  const Rational sign = ((1 + (m - delta) / 2) % 2) ? Rational(-1) : Rational(1);
  return sign * Rational(1, 2) * rpow(Rational(2, f), m) * generalized_bernoulli(m, d) / Rational(factorial(m));
}

double zeta_positive(int s) {
  if (s < 2) throw InvalidInput("zeta needs s ≥ 2");
  const double eta = alternating_sum([s](int k) { return std::pow(k + 1.0, -s); });
  return eta / (1.0 - std::pow(2.0, 1 - s));
}

double dirichlet_beta(int s) {
  if (s < 1) throw InvalidInput("beta needs s ≥ 1");
  return alternating_sum([s](int k) { return std::pow(2.0 * k + 1.0, -s); });
}

double l_chi4_positive(int s) { return dirichlet_beta(s); }

BigInt fundamental_discriminant(const BigInt& a) {
  if (a == 0) throw InvalidInput("zero has no discriminant");
  BigInt rest = abs(a);
  BigInt core = 1;
  for (BigInt p = 2; p * p <= rest; ++p) {
    int e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    if (e % 2) core *= p;
  }
  core *= rest;
  if (a < 0) core = -core;
  if (core == 1) return 1;
  return mod_floor(core, 4) == 1 ? core : 4 * core;
}

}  // namespace latdens

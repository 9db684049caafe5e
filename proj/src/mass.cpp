#include "latdens/mass.hpp"

#include "latdens/density.hpp"
#include "latdens/errors.hpp"
#include "latdens/odd_prime.hpp"
#include "latdens/special_values.hpp"

#include <cmath>
#include <future>
#include <numbers>

namespace latdens {
namespace {

BigInt factorial(int n) {
  BigInt r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

std::vector<BigInt> prime_divisors(BigInt n) {
  std::vector<BigInt> out;
  n = abs(n);
  for (BigInt p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

bool is_prime(const BigInt& n) {
  if (n < 2) return false;
  for (BigInt p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

Matrix<Rational> to_rational(const Matrix<BigInt>& g) {
  Matrix<Rational> out(g.rows(), g.cols(), Rational(0));
  for (std::size_t r = 0; r < g.rows(); ++r)
    for (std::size_t c = 0; c < g.cols(); ++c) out(r, c) = Rational(g(r, c));
  return out;
}

// Leading principal minors; all positive iff positive definite.
bool positive_definite(const Matrix<Rational>& g, Rational* det) {
  Matrix<Rational> m = g;
  const std::size_t n = m.rows();
  Rational d = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (m(k, k) <= 0) return false;
    d *= m(k, k);
    for (std::size_t r = k + 1; r < n; ++r) {
      const Rational c = m(r, k) / m(k, k);
      for (std::size_t j = k; j < n; ++j) m(r, j) -= c * m(k, j);
    }
  }
  *det = d;
  return true;
}

// Standard local factor Π(1 − p^{−2i})·(1 − χ(p)p^{−m}) of a lattice unimodular at p.
Rational standard_factor(int n, const BigInt& p, const BigInt& disc) {
  const int top = n % 2 ? (n - 1) / 2 : n / 2 - 1;
  Rational f = 1;
  for (int i = 1; i <= top; ++i) f *= 1 - rpow(Rational(p), -2 * i);
  if (n % 2 == 0) f *= 1 - kronecker(disc, p) * rpow(Rational(p), -n / 2);
  return f;
}

Rational dyadic_density(const Matrix<Rational>& gram) {
  const RingDescriptor& ring = RingDescriptor::get(1, 40);
  return local_density(QuadLattice(ring, ring_matrix(ring, gram)));
}

}  // namespace

double ArchimedeanConstant::value() const {
  return static_cast<double>(rational) * std::pow(std::numbers::pi, pi_power);
}

ArchimedeanConstant archimedean_constant(int n) {
  if (n < 2) throw InvalidInput("archimedean constant needs n ≥ 2");
  ArchimedeanConstant c;
  const int m = n / 2;
  if (n % 2) {
    for (int i = 1; i <= m; ++i) c.degrees.push_back(2 * i);
  } else {
    for (int i = 1; i < m; ++i) c.degrees.push_back(2 * i);
    c.degrees.push_back(m);
  }
  const BigInt mu = n % 2 ? BigInt(1) << ((n + 1) / 2) : BigInt(1) << n;
  Rational r(mu);
  int total = 0;
  for (int d : c.degrees) {
    r *= Rational(factorial(d - 1));
    total += d;
  }
  c.rational = r / Rational(BigInt(1) << total);
  c.pi_power = -total;
  return c;
}

MassReport mass_via_local(const Matrix<BigInt>& gram) {
  const int n = static_cast<int>(gram.rows());
  if (n < 2 || !gram.square()) throw InvalidInput("mass needs a square Gram matrix of rank at least 2");
  for (std::size_t r = 0; r < gram.rows(); ++r)
    for (std::size_t c = r + 1; c < gram.cols(); ++c)
      if (gram(r, c) != gram(c, r)) throw InvalidInput("Gram matrix must be symmetric");
  const Matrix<Rational> g = to_rational(gram);
  Rational det_r;
  if (!positive_definite(g, &det_r)) throw InvalidInput("Gram matrix is not positive definite");
  const BigInt det = num(det_r);
  const int m = n / 2;
  const BigInt disc = n % 2 ? BigInt(1) : fundamental_discriminant(m % 2 ? BigInt(-det) : det);

  MassReport report;
  report.archimedean = archimedean_constant(n);

  std::vector<BigInt> bad = prime_divisors(2 * det);
  std::vector<std::future<Rational>> jobs;
  for (const BigInt& p : bad)
    jobs.push_back(std::async(std::launch::async, [&g, p] {
      return p == 2 ? dyadic_density(g) : odd_prime_density(g, p);
    }));
  Rational euler = 1;
  for (std::size_t k = 0; k < bad.size(); ++k) {
    const Rational beta = jobs[k].get();
    report.local.push_back({bad[k], beta});
    euler *= standard_factor(n, bad[k], disc) / beta;
  }
  // Good primes must reproduce the standard factor; check the first few.
  int checked = 0;
  for (BigInt p = 3; checked < 3; p += 2) {
    if (!is_prime(p) || det % p == 0) continue;
    if (odd_prime_density(g, p) != standard_factor(n, p, disc))
      throw Error("odd-prime density disagrees with the standard factor at a good prime");
    ++checked;
  }

  // Π ζ(2i) and L(m, χ) as rationals times π-powers; the π-powers cancel c(L).
  Rational special = 1;
  int pi_power = 0;
  const int top = n % 2 ? m : m - 1;
  for (int i = 1; i <= top; ++i) {
    special *= zeta_even_over_pi(i);
    pi_power += 2 * i;
  }
  Rational root = 1;  // rational value of √(|d|·det) or √det
  if (n % 2 == 0) {
    pi_power += m;
    BigInt s;
    if (disc == 1) {
      special *= zeta_even_over_pi(m / 2);
      if (!is_perfect_square(det, &s)) throw Error("square class mismatch for a trivial character");
    } else {
      special *= dirichlet_l_positive_over_pi(m, disc);
      if (!is_perfect_square(abs(disc) * det, &s)) throw Error("square class mismatch for the quadratic character");
    }
    root = Rational(s);
  }
  if (pi_power + report.archimedean.pi_power != 0) throw Error("π-powers do not cancel");
  const Rational det_power = rpow(Rational(det), n % 2 ? (n + 1) / 2 : n / 2) * root;
  report.mass = report.archimedean.rational * det_power * euler * special;
  if (report.mass <= 0) throw Error("mass must be positive");
  return report;
}

NumberFieldData NumberFieldData::rationals() { return NumberFieldData{}; }

bool NumberFieldData::is_rationals() const {
  return degree == 1 && discriminant == 1 && dyadic_residue_degrees == std::vector<int>{1};
}

Rational sum_squares_d_factor(int n, const NumberFieldData& field) {
  Rational d = 1;
  const int m = n / 2;
  const int r8 = n % 8;
  for (int fv : field.dyadic_residue_degrees) {
    const Rational q(BigInt(1) << fv);
    const bool odd_degree = fv % 2 == 1;
    if (n % 2 == 1) {
      const bool plus = r8 == 1 || r8 == 7 || !odd_degree;
      d *= (rpow(q, m) + (plus ? 1 : -1)) / (2 * rpow(q, m + 1));
    } else if (r8 == 0 || r8 == 4) {
      const bool plus = r8 == 0 || !odd_degree;
      d *= (rpow(q, m - 1) + (plus ? 1 : -1)) * (rpow(q, m) - 1) / (2 * rpow(q, 2 * m));
    } else {
      d *= 1 / (2 * q);
    }
  }
  return d;
}

namespace {

Rational field_zeta_negative(const NumberFieldData& field, int i) {
  if (field.is_rationals()) return zeta_nonpositive(1 - 2 * i);
  const auto it = field.zeta_negative.find(i);
  if (it == field.zeta_negative.end()) throw MissingFieldData("missing ζ_k(1−2i) for i = " + std::to_string(i));
  return it->second;
}

}  // namespace

Rational sum_squares_mass_rational(int n, const NumberFieldData& field) {
  if (n < 2) throw InvalidInput("sum-of-squares mass needs n ≥ 2");
  const int d = field.degree;
  const int m = n / 2;
  const Rational dl = sum_squares_d_factor(n, field);
  if (n % 2 == 1) {
    Rational prod = 1;
    for (int i = 1; i <= m; ++i) prod *= field_zeta_negative(field, i);
    const long sign_exp = static_cast<long>(m) * (m + 1) * d / 2;
    const Rational sign = sign_exp % 2 ? Rational(-1) : Rational(1);
    return sign * rpow(Rational(field.discriminant), m) * Rational(BigInt(1) << d) * dl * prod;
  }
  Rational prod = 1;
  for (int i = 1; i < m; ++i) prod *= field_zeta_negative(field, i);
  Rational l_value;
  Rational conductor_factor = 1;
  Rational eps = 1;
  if (field.is_rationals()) {
    if (m % 2 == 0) {
      l_value = zeta_nonpositive(1 - m);
    } else {
      l_value = l_chi4_nonpositive(1 - m);
      conductor_factor = rpow(Rational(2), 1 - n);  // 4^{(1−n)/2}
    }
  } else {
    const auto it = field.l_negative.find(m);
    if (it != field.l_negative.end()) l_value = it->second;
    else if (m % 2 == 0) l_value = field_zeta_negative(field, m / 2);
    else throw MissingFieldData("missing L_k(1−m, χ)");
    if (m % 2 == 1) {
      if (!field.conductor_norm || !field.root_number) throw MissingFieldData("missing conductor norm or root number");
      BigInt s;
      if (!is_perfect_square(*field.conductor_norm, &s))
        throw MissingFieldData("conductor norm must be a perfect square for an exact value");
      conductor_factor = rpow(Rational(s), 1 - n);
      eps = *field.root_number;
    }
  }
  return Rational(BigInt(1) << (m * d)) * dl * eps * conductor_factor * l_value * prod;
}

double sum_squares_mass_analytic(int n, const NumberFieldData& field) {
  if (n < 2) throw InvalidInput("sum-of-squares mass needs n ≥ 2");
  const int d = field.degree;
  const int m = n / 2;
  const double two_pi = 2.0 * std::numbers::pi;
  auto zeta_k = [&](int i) {
    if (field.is_rationals()) return zeta_positive(2 * i);
    const auto it = field.zeta_positive.find(i);
    if (it == field.zeta_positive.end()) throw MissingFieldData("missing ζ_k(2i)");
    return it->second;
  };
  const double dl = static_cast<double>(sum_squares_d_factor(n, field));
  const double dk = std::pow(static_cast<double>(field.discriminant), n * (n - 1) / 4.0);
  if (n % 2 == 1) {
    double c = std::pow(2.0, m + 1);
    double prod = 1.0;
    for (int i = 1; i <= m; ++i) {
      c *= static_cast<double>(factorial(2 * i - 1)) / std::pow(two_pi, 2 * i);
      prod *= zeta_k(i);
    }
    return std::pow(c, d) * dk * dl * prod;
  }
  double c = std::pow(2.0, 2 * m) * static_cast<double>(factorial(m - 1)) / std::pow(two_pi, m);
  double prod = 1.0;
  for (int i = 1; i < m; ++i) {
    c *= static_cast<double>(factorial(2 * i - 1)) / std::pow(two_pi, 2 * i);
    prod *= zeta_k(i);
  }
  double l;
  if (field.is_rationals()) {
    l = m % 2 ? l_chi4_positive(m) : zeta_positive(m);
  } else {
    const auto it = field.l_positive.find(m);
    if (it == field.l_positive.end()) throw MissingFieldData("missing L_k(m, χ)");
    l = it->second;
  }
  return std::pow(c, d) * dk * dl * l * prod;
}

MassReport sum_squares_mass_report(int n, const NumberFieldData& field) {
  MassReport r;
  r.archimedean = archimedean_constant(n);
  r.mass = sum_squares_mass_rational(n, field);
  if (field.is_rationals()) {
    Matrix<Rational> id(n, n, Rational(0));
    for (int k = 0; k < n; ++k) id(k, k) = 1;
    r.local.push_back({BigInt(2), dyadic_density(id)});
    r.analytic = sum_squares_mass_analytic(n, field);
  } else if (!field.zeta_positive.empty()) {
    r.analytic = sum_squares_mass_analytic(n, field);
  }
  return r;
}

}  // namespace latdens

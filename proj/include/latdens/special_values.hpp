#pragma once

#include "latdens/rational.hpp"

namespace latdens {

// Bernoulli numbers with B_1 = −1/2.
Rational bernoulli(int k);
Rational bernoulli_polynomial(int k, const Rational& x);
// B_{k,χ} for the primitive quadratic character of fundamental discriminant d (d = 1: trivial, B_1 = +1/2).
Rational generalized_bernoulli(int k, const BigInt& d);

// ζ(s) for integers s ≤ 0.
Rational zeta_nonpositive(int s);
// L(s, χ_d) for integers s ≤ 0.
Rational dirichlet_l_nonpositive(int s, const BigInt& d);
Rational l_chi4_nonpositive(int s);

// ζ(2k)/π^{2k} as an exact rational.
Rational zeta_even_over_pi(int k);
// For m ≥ 1 with χ_d(−1) = (−1)^m: L(m, χ_d) = r·√|d|·π^m; returns r.
Rational dirichlet_l_positive_over_pi(int m, const BigInt& d);

// Floating values by accelerated alternating series.
double zeta_positive(int s);
double dirichlet_beta(int s);  // L(s, χ₋₄)
double l_chi4_positive(int s);

// Fundamental discriminant of Q(√a) for a nonzero integer a (1 when a is a square).
BigInt fundamental_discriminant(const BigInt& a);

}  // namespace latdens

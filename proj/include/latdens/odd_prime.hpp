#pragma once

#include "latdens/matrix.hpp"
#include "latdens/rational.hpp"

#include <vector>

namespace latdens {

struct OddConstituent {
  int scale = 0;
  std::size_t rank = 0;
  Rational unit_determinant;  // determinant of the block divided by p^{scale·rank}
};

struct OddJordanSymbol {
  BigInt p;
  std::vector<OddConstituent> constituents;  // strictly increasing scales
};

// Legendre symbol (a/p) for an odd prime p and a p-adic unit a.
int legendre(const Rational& a, const BigInt& p);
// Kronecker symbol (d/n) for n ≥ 1.
int kronecker(const BigInt& d, const BigInt& n);

// Diagonal Jordan splitting over Z_p (p odd) of a nondegenerate rational Gram matrix.
OddJordanSymbol odd_jordan(const Matrix<Rational>& gram, const BigInt& p);

// β_p = (1/2)·p^{N_p − n(n−1)/2}·p^{dimRu}·Π #O^{ε_i}(n_i, F_p).
Rational odd_prime_density(const OddJordanSymbol& symbol);
Rational odd_prime_density(const Matrix<Rational>& gram, const BigInt& p);

}  // namespace latdens

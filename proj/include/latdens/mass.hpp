#pragma once

#include "latdens/matrix.hpp"
#include "latdens/rational.hpp"

#include <map>
#include <optional>
#include <vector>

namespace latdens {

// Exact archimedean constant c(L) = rational·π^{pi_power}.
struct ArchimedeanConstant {
  Rational rational;
  int pi_power = 0;
  std::vector<int> degrees;  // degrees of SO(n)
  double value() const;
};
ArchimedeanConstant archimedean_constant(int n);

// Totally real field data for the sum-of-squares formulas.
struct NumberFieldData {
  int degree = 1;
  BigInt discriminant = 1;
  std::vector<int> dyadic_residue_degrees{1};
  std::map<int, Rational> zeta_negative;      // i ↦ ζ_k(1 − 2i)
  std::map<int, Rational> l_negative;         // m ↦ L_k(1 − m, χ) for the character of k(√(−1)^m)
  std::optional<BigInt> conductor_norm;       // N𝔣(χ)
  std::optional<int> root_number;             // ε(χ)
  std::map<int, double> zeta_positive;        // i ↦ ζ_k(2i)
  std::map<int, double> l_positive;           // m ↦ L_k(m, χ)

  static NumberFieldData rationals();
  bool is_rationals() const;
};

struct LocalFactor {
  BigInt p;
  Rational density;
};

struct MassReport {
  std::vector<LocalFactor> local;
  ArchimedeanConstant archimedean;
  Rational mass;
  std::optional<double> analytic;
};

// Mass Σ 1/#O(Λ) of the genus of a positive definite integral Gram matrix (n ≥ 2).
MassReport mass_via_local(const Matrix<BigInt>& gram);

Rational sum_squares_d_factor(int n, const NumberFieldData& field);
Rational sum_squares_mass_rational(int n, const NumberFieldData& field);
double sum_squares_mass_analytic(int n, const NumberFieldData& field);
MassReport sum_squares_mass_report(int n, const NumberFieldData& field);

}  // namespace latdens

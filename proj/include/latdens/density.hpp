#pragma once

#include "latdens/invariant_chain.hpp"
#include "latdens/lattice.hpp"
#include "latdens/rational.hpp"

#include <map>
#include <string>
#include <vector>

namespace latdens {

struct ExponentReport {
  long t = 0;
  long b = 0;
  long c = 0;
  std::map<int, long> d;  // d_i = i·n_i(n_i+1)/2
  long cross = 0;         // Σ_{i<j} i·n_i·n_j
  long nm = 0;
  long nq = 0;
  long n = 0;
};

ExponentReport exponents(const JordanSymbol& symbol, const std::vector<ConstituentType>& types);

struct ReductiveFactor {
  int scale = 0;
  std::size_t dim = 0;  // dim V̄_i
  OrthogonalClass cls = OrthogonalClass::OddDimensional;
  BigInt order;         // SO for odd dimension, 2·SO^± for even positive dimension, 1 for dimension 0
  std::string label() const;
};

struct GroupOrderReport {
  long dim_g = 0;
  long dim_ru = 0;
  std::vector<ReductiveFactor> factors;
  int component_exponent = 0;
  BigInt special_fiber_order;
};

GroupOrderReport reductive_quotient(const ChainReport& chain, std::size_t rank, const BigInt& q);
// q^dimRu · Π factor orders · 2^{α+β}; throws NegativeUnipotentDim when dimRu < 0.
BigInt special_fiber_order(const GroupOrderReport& group, const BigInt& q);

struct DensityReport {
  JordanSymbol symbol;
  ChainReport chain;
  ExponentReport exponents;
  GroupOrderReport group;
  Rational density;
};

DensityReport density_report(const QuadLattice& lattice);
// β_L = (1/2)·q^{N − n(n−1)/2}·#G̃(κ); 1 for the zero lattice.
Rational local_density(const QuadLattice& lattice);

}  // namespace latdens

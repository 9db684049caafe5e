#include "latdens/density.hpp"

#include "latdens/errors.hpp"
#include "latdens/group_orders.hpp"

namespace latdens {

ExponentReport exponents(const JordanSymbol& symbol, const std::vector<ConstituentType>& types) {
  ExponentReport e;
  long sum_d = 0;
  long nm_cross = 0;
  long nq_cross = 0;
  long type_one_rank = 0;
  for (const auto& t : types) {
    const long ni = static_cast<long>(t.rank);
    if (t.parity == Parity::I) {
      ++e.t;
      type_one_rank += ni;
      if (symbol.parity_at(t.scale + 1) == Parity::I) ++e.b;
    } else {
      e.c += ni;
    }
    e.d[t.scale] = t.scale * ni * (ni + 1) / 2;
    sum_d += e.d[t.scale];
  }
  for (std::size_t a = 0; a < types.size(); ++a)
    for (std::size_t b = a + 1; b < types.size(); ++b) {
      const long ni = static_cast<long>(types[a].rank);
      const long nj = static_cast<long>(types[b].rank);
      const long i = types[a].scale;
      const long j = types[b].scale;
      e.cross += i * ni * nj;
      nm_cross += (j - i) * ni * nj;
      nq_cross += j * ni * nj;
    }
  e.nm = (2 * type_one_rank - e.t) + nm_cross + 2 * e.b;
  e.nq = 2 * type_one_rank + nq_cross + sum_d + e.b + e.c;
  e.n = e.nq - e.nm;
  if (e.n != e.t + e.cross + sum_d - e.b + e.c) throw Error("exponent bookkeeping mismatch");
  return e;
}

std::string ReductiveFactor::label() const {
  const std::string d = std::to_string(dim);
  switch (cls) {
    case OrthogonalClass::OddDimensional: return "SO(" + d + ")";
    case OrthogonalClass::Split: return dim == 0 ? "O(0)" : "O+(" + d + ")";
    case OrthogonalClass::Nonsplit: return "O-(" + d + ")";
  }
  return "?";
}

GroupOrderReport reductive_quotient(const ChainReport& chain, std::size_t rank, const BigInt& q) {
  GroupOrderReport g;
  const long n = static_cast<long>(rank);
  g.dim_g = n * (n - 1) / 2;
  long reductive_dim = 0;
  for (const auto& s : chain.scales) {
    const long k = static_cast<long>(s.residue.dim());
    reductive_dim += k * (k - 1) / 2;
  }
  g.dim_ru = g.dim_g - reductive_dim;
  for (const auto& t : chain.constituents) {
    ReductiveFactor f;
    f.scale = t.scale;
    f.dim = t.vbar_dim;
    f.cls = t.vbar_class;
    const int m = static_cast<int>(f.dim / 2);
    if (f.dim % 2 == 1) f.order = finite_orthogonal_order(OrthogonalClass::OddDimensional, m, q);
    else if (f.dim == 0) f.order = 1;
    else f.order = 2 * finite_orthogonal_order(f.cls, m, q);
    g.factors.push_back(f);
  }
  g.component_exponent = chain.alpha + chain.beta;
  g.special_fiber_order = special_fiber_order(g, q);
  return g;
}

BigInt special_fiber_order(const GroupOrderReport& group, const BigInt& q) {
  if (group.dim_ru < 0) throw NegativeUnipotentDim("unipotent radical of negative dimension");
  BigInt order = ipow(q, static_cast<unsigned>(group.dim_ru));
  for (const auto& f : group.factors) order *= f.order;
  return order << group.component_exponent;
}

DensityReport density_report(const QuadLattice& lattice) {
  DensityReport r;
  const BigInt q(lattice.ring().residue_cardinality());
  if (lattice.rank() == 0) {
    r.density = 1;
    return r;
  }
  r.symbol = jordan_split(lattice);
  r.chain = analyze_chain(r.symbol);
  r.exponents = exponents(r.symbol, r.chain.constituents);
  r.group = reductive_quotient(r.chain, lattice.rank(), q);
  const long n = static_cast<long>(lattice.rank());
  r.density = rpow(Rational(q), static_cast<int>(r.exponents.n - n * (n - 1) / 2)) *
              Rational(r.group.special_fiber_order) / 2;
  return r;
}

Rational local_density(const QuadLattice& lattice) { return density_report(lattice).density; }

}  // namespace latdens

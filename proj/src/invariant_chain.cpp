#include "latdens/invariant_chain.hpp"

#include "latdens/errors.hpp"

#include <algorithm>
#include <set>

namespace latdens {

const char* to_string(FineType t) {
  switch (t) {
    case FineType::IOdd: return "Io";
    case FineType::IEven1: return "Ie1";
    case FineType::IEven2: return "Ie2";
    case FineType::IEvenBound: return "Ie";
    case FineType::II: return "II";
  }
  return "?";
}

const ScaleChain* ChainReport::at_scale(int scale) const {
  for (const auto& s : scales)
    if (s.spaces.scale == scale) return &s;
  return nullptr;
}

namespace {

std::size_t constituent_index(const JordanSymbol& symbol, int scale) {
  for (std::size_t k = 0; k < symbol.constituents.size(); ++k)
    if (symbol.constituents[k].scale == scale) return k;
  return symbol.constituents.size();
}

}  // namespace

ScaleChain chain_at_scale(const JordanSymbol& symbol, int i) {
  const RingDescriptor& ring = *symbol.ring;
  const ResidueField& field = ring.residue_field();
  const KappaElem kz = KappaElem::zero(field);
  const std::size_t n = symbol.rank();

  const std::size_t ci = constituent_index(symbol, i);
  const bool present = ci < symbol.constituents.size();
  const std::size_t off = present ? symbol.offset(ci) : 0;
  const std::size_t ni = present ? symbol.constituents[ci].rank() : 0;

  // Polar form of q/2^i mod 2 and the diagonal of the additive form on A_i/2A_i.
  Matrix<KappaElem> polar(n, n, kz);
  KVec q0(n, kz);
  for (std::size_t a = 0; a < ni; ++a) {
    for (std::size_t b = 0; b < ni; ++b) polar(off + a, off + b) = symbol.constituents[ci].unimodular(a, b).residue();
    q0[off + a] = polar(off + a, off + a);
  }

  ScaleChain out;
  ChainSpaces& sp = out.spaces;
  sp.scale = i;
  sp.ambient = n;
  sp.b = additive_form_kernel(field, q0);
  for (std::size_t k = 0; k < n; ++k)
    if (k < off || k >= off + ni) sp.x.push_back(kappa_unit_vec(field, n, k));

  sp.characteristic = kappa_zero_vec(field, n);
  if (ni > 0) {
    Matrix<KappaElem> ubar(ni, ni, kz);
    KVec s(ni, kz);
    for (std::size_t a = 0; a < ni; ++a) {
      for (std::size_t b = 0; b < ni; ++b) ubar(a, b) = polar(off + a, off + b);
      s[a] = kappa_sqrt(ubar(a, a));
    }
    const auto sol = kappa_linear_solve(ubar, s);
    if (!sol.particular || !sol.kernel.empty()) throw PrecisionExhausted("unimodular block singular modulo 2");
    for (std::size_t a = 0; a < ni; ++a) sp.characteristic[off + a] = (*sol.particular)[a];
  }
  sp.w = sp.x;
  if (std::any_of(sp.characteristic.begin(), sp.characteristic.end(), [](const KappaElem& e) { return !e.is_zero(); }))
    sp.w.push_back(sp.characteristic);

  // q/2^{i+1} mod 2 on B̄: the block at scale i contributes (xᵀU_i x)/2, neighbors contribute Σ ū_kk x_k².
  auto q1 = [&](const KVec& v) {
    KappaElem acc = kz;
    if (ni > 0) {
      std::vector<RingElem> lifted;
      for (std::size_t a = 0; a < ni; ++a) lifted.push_back(RingElem::lift(ring, v[off + a]));
      RingElem val = RingElem::zero(ring);
      const RingMatrix& u = symbol.constituents[ci].unimodular;
      for (std::size_t a = 0; a < ni; ++a) {
        if (lifted[a].is_exact_zero()) continue;
        for (std::size_t b = 0; b < ni; ++b) val += lifted[a] * u(a, b) * lifted[b];
      }
      if (val.absolute_precision() < 2) throw PrecisionExhausted("constituent known to fewer than two bits");
      acc = acc + val.shifted(-1).residue();
    }
    for (int nb : {i - 1, i + 1}) {
      const std::size_t cj = constituent_index(symbol, nb);
      if (cj == symbol.constituents.size()) continue;
      const std::size_t o = symbol.offset(cj);
      const RingMatrix& u = symbol.constituents[cj].unimodular;
      for (std::size_t a = 0; a < u.rows(); ++a) acc = acc + u(a, a).residue() * v[o + a] * v[o + a];
    }
    return acc;
  };

  KappaQuadraticForm qb;
  qb.field = &field;
  qb.polar = Matrix<KappaElem>(sp.b.size(), sp.b.size(), kz);
  for (std::size_t a = 0; a < sp.b.size(); ++a) {
    qb.diag.push_back(q1(sp.b[a]));
    for (std::size_t c = a + 1; c < sp.b.size(); ++c)
      qb.polar(a, c) = qb.polar(c, a) = bilinear(polar, sp.b[a], sp.b[c], kz);
  }
  for (const auto& v : polar_radical(qb)) sp.y.push_back(combine(sp.b, v, n, kz));
  const std::vector<KVec> zc = quadratic_kernel(qb);
  for (const auto& v : zc) sp.z.push_back(combine(sp.b, v, n, kz));

  std::vector<KVec> units;
  for (std::size_t a = 0; a < sp.b.size(); ++a) units.push_back(kappa_unit_vec(field, sp.b.size(), a));
  const std::vector<KVec> comp = extend_basis(zc, units, sp.b.size(), kz);
  ResidueSpace& rs = out.residue;
  rs.scale = i;
  rs.form = qb.restrict_to(comp);
  for (const auto& v : comp) rs.basis.push_back(combine(sp.b, v, n, kz));
  rs.nonsingular = is_nonsingular(rs.form);
  if (!rs.nonsingular) throw Error("residue quadratic form is singular at scale " + std::to_string(i));
  rs.cls = residue_form_class(rs.form);
  return out;
}

std::vector<ScaleChain> chain_compute(const JordanSymbol& symbol) {
  std::vector<ScaleChain> out;
  if (symbol.constituents.empty()) return out;
  const int lo = symbol.constituents.front().scale - 1;
  const int hi = symbol.constituents.back().scale + 1;
  for (int i = lo; i <= hi; ++i) out.push_back(chain_at_scale(symbol, i));
  return out;
}

std::size_t expected_vbar_dimension(Parity parity, std::size_t rank, bool bound, std::optional<FineType> type) {
  if (parity == Parity::II) return bound ? rank + 1 : rank;
  if (rank % 2 == 1) return bound ? rank : rank - 1;
  if (bound) return rank - 1;
  return type == FineType::IEven2 ? rank - 2 : rank - 1;
}

std::vector<ConstituentType> classify(const JordanSymbol& symbol, const std::vector<ScaleChain>& chain) {
  std::vector<ConstituentType> out;
  for (const auto& c : symbol.constituents) {
    ConstituentType t;
    t.scale = c.scale;
    t.rank = c.rank();
    t.parity = c.parity;
    t.bound = symbol.parity_at(c.scale - 1) == Parity::I || symbol.parity_at(c.scale + 1) == Parity::I;
    const ScaleChain* sc = nullptr;
    for (const auto& s : chain)
      if (s.spaces.scale == c.scale) sc = &s;
    if (!sc) throw Error("chain missing for a constituent scale");
    t.vbar_dim = sc->residue.dim();
    t.vbar_class = sc->residue.cls;
    if (c.parity == Parity::II) t.type = FineType::II;
    else if (t.rank % 2 == 1) t.type = FineType::IOdd;
    else if (t.bound) t.type = FineType::IEvenBound;
    else t.type = t.vbar_dim % 2 == 1 ? FineType::IEven1 : FineType::IEven2;
    out.push_back(t);
  }
  return out;
}

int alpha(const std::vector<ConstituentType>& types) {
  return static_cast<int>(std::count_if(types.begin(), types.end(), [](const ConstituentType& t) {
    return t.type == FineType::IEven1;
  }));
}

ParityMap parity_map(const std::vector<ConstituentType>& types) {
  ParityMap m;
  for (const auto& t : types) m[t.scale] = t.parity;
  return m;
}

namespace {

Parity parity_of(const ParityMap& m, int scale) {
  const auto it = m.find(scale);
  return it == m.end() ? Parity::II : it->second;
}

}  // namespace

int beta_direct(const ParityMap& parities) {
  int count = 0;
  for (const auto& [scale, p] : parities)
    if (p == Parity::I && parity_of(parities, scale + 2) == Parity::II) ++count;
  return count;
}

int beta_run_count(const ParityMap& parities) {
  int runs = 0;
  for (int cls = 0; cls < 2; ++cls) {
    std::vector<int> ones;
    for (const auto& [scale, p] : parities)
      if (p == Parity::I && ((scale % 2) + 2) % 2 == cls) ones.push_back(scale);
    // Scales are sorted; a run breaks whenever consecutive members of the class are not adjacent.
    for (std::size_t k = 0; k < ones.size(); ++k)
      if (k == 0 || ones[k] != ones[k - 1] + 2) ++runs;
  }
  return runs;
}

int beta(const std::vector<ConstituentType>& types) { return beta_direct(parity_map(types)); }

ChainReport analyze_chain(const JordanSymbol& symbol) {
  ChainReport report;
  report.scales = chain_compute(symbol);
  report.constituents = classify(symbol, report.scales);
  report.alpha = alpha(report.constituents);
  report.beta = beta(report.constituents);
  return report;
}

RingMatrix chain_lattice_basis(const JordanSymbol& symbol, int scale, const std::vector<KVec>& sub) {
  const RingDescriptor& ring = *symbol.ring;
  const ResidueField& field = ring.residue_field();
  const std::size_t n = symbol.rank();
  // Diagonal scaling of A_i in the Jordan basis.
  std::vector<int> shift(n, 0);
  for (std::size_t k = 0; k < symbol.constituents.size(); ++k) {
    const int s = std::max(0, scale - symbol.constituents[k].scale);
    for (std::size_t a = 0; a < symbol.constituents[k].rank(); ++a) shift[symbol.offset(k) + a] = s;
  }
  std::vector<KVec> units;
  for (std::size_t k = 0; k < n; ++k) units.push_back(kappa_unit_vec(field, n, k));
  const auto extra = extend_basis(sub, units, n, KappaElem::zero(field));
  RingMatrix out(n, n, RingElem::zero(ring));
  std::size_t col = 0;
  for (const auto& v : sub) {
    for (std::size_t r = 0; r < n; ++r) out(r, col) = RingElem::lift(ring, v[r]).shifted(shift[r]);
    ++col;
  }
  for (const auto& v : extra) {
    for (std::size_t r = 0; r < n; ++r) out(r, col) = RingElem::lift(ring, v[r]).shifted(shift[r] + 1);
    ++col;
  }
  return out;
}

}  // namespace latdens

#include "latdens/lattice.hpp"

#include "latdens/errors.hpp"
#include "latdens/field_linalg.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace latdens {

const char* to_string(Parity p) { return p == Parity::I ? "I" : "II"; }

RingMatrix ring_identity(const RingDescriptor& ring, std::size_t n) {
  RingMatrix m(n, n, RingElem::zero(ring));
  for (std::size_t i = 0; i < n; ++i) m(i, i) = RingElem::from_int(ring, 1);
  return m;
}

RingMatrix ring_matrix(const RingDescriptor& ring, const Matrix<std::int64_t>& m) {
  RingMatrix out(m.rows(), m.cols(), RingElem::zero(ring));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = RingElem::from_int(ring, m(r, c));
  return out;
}

RingMatrix ring_matrix(const RingDescriptor& ring, const Matrix<Rational>& m) {
  RingMatrix out(m.rows(), m.cols(), RingElem::zero(ring));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = RingElem::from_rational(ring, m(r, c));
  return out;
}

RingMatrix ring_multiply(const RingMatrix& a, const RingMatrix& b) { return multiply(a, b, RingElem()); }

RingMatrix ring_congruence(const RingMatrix& g, const RingMatrix& t) { return congruence(g, t, RingElem()); }

bool agree_mod(const RingMatrix& a, const RingMatrix& b, int bits) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) {
      const RingElem d = a(r, c) - b(r, c);
      if (d.is_exact_zero()) continue;
      if (d.is_zero()) {
        if (d.absolute_precision() < bits) return false;
        continue;
      }
      if (d.scale() < bits) return false;
    }
  return true;
}

QuadLattice::QuadLattice(const RingDescriptor& ring, RingMatrix gram) : ring_(&ring), gram_(std::move(gram)) {
  if (!gram_.square()) throw InvalidInput("Gram matrix must be square");
  for (std::size_t r = 0; r < gram_.rows(); ++r)
    for (std::size_t c = r + 1; c < gram_.cols(); ++c)
      if (!(gram_(r, c) == gram_(c, r))) throw InvalidInput("Gram matrix must be symmetric");
  for (std::size_t r = 0; r < gram_.rows(); ++r)
    for (std::size_t c = 0; c < gram_.cols(); ++c)
      if (gram_(r, c).ring() == nullptr) gram_(r, c) = RingElem::zero(ring);
      else if (gram_(r, c).ring() != &ring) throw InvalidInput("Gram entries belong to a different ring");
}

QuadLattice QuadLattice::from_integers(const RingDescriptor& ring, const Matrix<std::int64_t>& gram) {
  return QuadLattice(ring, ring_matrix(ring, gram));
}

QuadLattice QuadLattice::scaled(int k) const {
  RingMatrix g = gram_;
  for (std::size_t r = 0; r < g.rows(); ++r)
    for (std::size_t c = 0; c < g.cols(); ++c) g(r, c) = g(r, c).shifted(k);
  return QuadLattice(*ring_, std::move(g));
}

QuadLattice QuadLattice::transformed(const RingMatrix& t) const {
  RingMatrix g = ring_congruence(gram_, t);
  for (std::size_t r = 0; r < g.rows(); ++r)
    for (std::size_t c = r + 1; c < g.cols(); ++c) g(c, r) = g(r, c);
  return QuadLattice(*ring_, std::move(g));
}

namespace {

constexpr int kInfinity = std::numeric_limits<int>::max() / 4;

int entry_valuation(const RingElem& x) { return x.is_zero() ? kInfinity : x.scale(); }

}  // namespace

int norm_ideal(const RingMatrix& gram) {
  int v = kInfinity;
  for (std::size_t r = 0; r < gram.rows(); ++r)
    for (std::size_t c = 0; c < gram.cols(); ++c) {
      const int e = entry_valuation(gram(r, c));
      if (e == kInfinity) continue;
      v = std::min(v, r == c ? e : e + 1);
    }
  if (v == kInfinity) throw InvalidInput("norm of a degenerate lattice");
  return v;
}

int norm_ideal(const QuadLattice& lattice) { return norm_ideal(lattice.gram()); }

int scale_ideal(const RingMatrix& gram) {
  int v = kInfinity;
  for (std::size_t r = 0; r < gram.rows(); ++r)
    for (std::size_t c = 0; c < gram.cols(); ++c) v = std::min(v, entry_valuation(gram(r, c)));
  if (v == kInfinity) throw InvalidInput("scale of a degenerate lattice");
  return v;
}

int scale_ideal(const QuadLattice& lattice) { return scale_ideal(lattice.gram()); }

Parity parity_type(const RingMatrix& unimodular) {
  for (std::size_t r = 0; r < unimodular.rows(); ++r)
    if (unimodular(r, r).is_unit()) return Parity::I;
  return Parity::II;
}

bool is_unimodular(const RingMatrix& gram) {
  if (!gram.square()) return false;
  const std::size_t n = gram.rows();
  if (n == 0) return true;
  const ResidueField& field = gram(0, 0).ring() ? gram(0, 0).ring()->residue_field() : ResidueField::prime_field();
  Matrix<KappaElem> m(n, n, KappaElem::zero(field));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      if (gram(r, c).valuation_bound() < 0) return false;
      m(r, c) = gram(r, c).residue();
    }
  return row_reduce(m).pivot_cols.size() == n;
}

const JordanConstituent* JordanSymbol::at_scale(int scale) const {
  for (const auto& c : constituents)
    if (c.scale == scale) return &c;
  return nullptr;
}

Parity JordanSymbol::parity_at(int scale) const {
  const JordanConstituent* c = at_scale(scale);
  return c ? c->parity : Parity::II;
}

std::size_t JordanSymbol::rank_at(int scale) const {
  const JordanConstituent* c = at_scale(scale);
  return c ? c->rank() : 0;
}

std::size_t JordanSymbol::offset(std::size_t k) const {
  std::size_t off = 0;
  for (std::size_t j = 0; j < k; ++j) off += constituents[j].rank();
  return off;
}

JordanSymbol jordan_split(const QuadLattice& lattice) {
  const RingDescriptor& ring = lattice.ring();
  const std::size_t n = lattice.rank();
  RingMatrix g = lattice.gram();
  RingMatrix t = ring_identity(ring, n);
  std::vector<bool> active(n, true);

  struct Pivot {
    int scale;
    std::vector<std::size_t> indices;
  };
  std::vector<Pivot> pivots;
  RingElem det = RingElem::from_int(ring, 1);

  for (std::size_t remaining = n; remaining > 0;) {
    int best = kInfinity;
    int inexact = kInfinity;
    bool any_nonzero = false;
    for (std::size_t r = 0; r < n; ++r) {
      if (!active[r]) continue;
      for (std::size_t c = r; c < n; ++c) {
        if (!active[c]) continue;
        const RingElem& x = g(r, c);
        if (x.is_exact_zero()) continue;
        if (x.is_zero()) {
          inexact = std::min(inexact, x.absolute_precision());
          continue;
        }
        any_nonzero = true;
        best = std::min(best, x.scale());
      }
    }
    if (!any_nonzero) {
      if (inexact < kInfinity) throw PrecisionExhausted("Gram matrix degenerate at working precision");
      throw InvalidInput("Gram matrix is degenerate");
    }
    if (inexact <= best) throw PrecisionExhausted("pivot valuation not certified at working precision");

    std::vector<std::size_t> piv;
    for (std::size_t r = 0; r < n && piv.empty(); ++r)
      if (active[r] && !g(r, r).is_zero() && g(r, r).scale() == best) piv = {r};
    for (std::size_t r = 0; r < n && piv.empty(); ++r) {
      if (!active[r]) continue;
      for (std::size_t c = r + 1; c < n; ++c)
        if (active[c] && !g(r, c).is_zero() && g(r, c).scale() == best) {
          piv = {r, c};
          break;
        }
    }

    // Inverse of the pivot block.
    RingMatrix pinv(piv.size(), piv.size(), RingElem::zero(ring));
    RingElem block_det;
    if (piv.size() == 1) {
      block_det = g(piv[0], piv[0]);
      pinv(0, 0) = block_det.inverse();
    } else {
      const RingElem& a = g(piv[0], piv[0]);
      const RingElem& b = g(piv[0], piv[1]);
      const RingElem& d = g(piv[1], piv[1]);
      block_det = a * d - b * b;
      const RingElem inv = block_det.inverse();
      pinv(0, 0) = d * inv;
      pinv(0, 1) = -(b * inv);
      pinv(1, 0) = pinv(0, 1);
      pinv(1, 1) = a * inv;
    }
    det = det * block_det;
    for (std::size_t p : piv) active[p] = false;

    // Coefficients c^(k) = P⁻¹·G[P, k] for every remaining index k.
    std::vector<std::size_t> rest;
    for (std::size_t k = 0; k < n; ++k)
      if (active[k]) rest.push_back(k);
    std::vector<std::vector<RingElem>> coeff(n);
    for (std::size_t k : rest) {
      coeff[k].assign(piv.size(), RingElem::zero(ring));
      for (std::size_t a = 0; a < piv.size(); ++a)
        for (std::size_t b = 0; b < piv.size(); ++b) coeff[k][a] += pinv(a, b) * g(piv[b], k);
    }
    for (std::size_t ki = 0; ki < rest.size(); ++ki) {
      const std::size_t k = rest[ki];
      for (std::size_t li = ki; li < rest.size(); ++li) {
        const std::size_t l = rest[li];
        RingElem v = g(k, l);
        for (std::size_t a = 0; a < piv.size(); ++a) v -= g(k, piv[a]) * coeff[l][a];
        g(k, l) = v;
        g(l, k) = v;
      }
    }
    for (std::size_t k : rest) {
      for (std::size_t a = 0; a < piv.size(); ++a) {
        g(k, piv[a]) = RingElem::zero(ring);
        g(piv[a], k) = RingElem::zero(ring);
        for (std::size_t r = 0; r < n; ++r) t(r, k) -= coeff[k][a] * t(r, piv[a]);
      }
    }
    pivots.push_back({best, piv});
    remaining -= piv.size();
  }

  JordanSymbol symbol;
  symbol.ring = &ring;
  symbol.determinant = det;
  symbol.basis = RingMatrix(n, n, RingElem::zero(ring));
  std::size_t col = 0;
  for (std::size_t p = 0; p < pivots.size();) {
    const int scale = pivots[p].scale;
    std::vector<std::size_t> idx;
    for (; p < pivots.size() && pivots[p].scale == scale; ++p)
      idx.insert(idx.end(), pivots[p].indices.begin(), pivots[p].indices.end());
    JordanConstituent c;
    c.scale = scale;
    c.unimodular = RingMatrix(idx.size(), idx.size(), RingElem::zero(ring));
    for (std::size_t a = 0; a < idx.size(); ++a) {
      for (std::size_t b = 0; b < idx.size(); ++b) c.unimodular(a, b) = g(idx[a], idx[b]).shifted(-scale);
      for (std::size_t r = 0; r < n; ++r) symbol.basis(r, col) = t(r, idx[a]);
      ++col;
    }
    c.parity = parity_type(c.unimodular);
    symbol.constituents.push_back(std::move(c));
  }
  return symbol;
}

RingMatrix block_assembly(const JordanSymbol& symbol) {
  const std::size_t n = symbol.rank();
  RingMatrix out(n, n, RingElem::zero(*symbol.ring));
  std::size_t off = 0;
  for (const auto& c : symbol.constituents) {
    for (std::size_t a = 0; a < c.rank(); ++a)
      for (std::size_t b = 0; b < c.rank(); ++b) out(off + a, off + b) = c.unimodular(a, b).shifted(c.scale);
    off += c.rank();
  }
  return out;
}

Discriminant discriminant(const QuadLattice& lattice) {
  const JordanSymbol symbol = jordan_split(lattice);
  Discriminant d;
  const RingElem& det = symbol.determinant;
  d.valuation = *det.valuation();
  d.unit_mod8 = det.shifted(-d.valuation).residue_mod_pow2(3);
  return d;
}

}  // namespace latdens

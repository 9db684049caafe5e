#include "latdens/normal_form.hpp"

#include "latdens/errors.hpp"
#include "latdens/kappa_forms.hpp"

namespace latdens {
namespace {

using RVec = std::vector<RingElem>;

struct Context {
  const RingDescriptor& ring;
  const RingMatrix& u;

  RingElem zero() const { return RingElem::zero(ring); }
  RingElem one() const { return RingElem::from_int(ring, 1); }

  RingElem inner(const RVec& x, const RVec& y) const {
    RingElem acc = zero();
    for (std::size_t r = 0; r < x.size(); ++r) {
      if (x[r].is_exact_zero()) continue;
      RingElem row = zero();
      for (std::size_t c = 0; c < y.size(); ++c)
        if (!y[c].is_exact_zero()) row += u(r, c) * y[c];
      acc += x[r] * row;
    }
    return acc;
  }
  RingElem q(const RVec& x) const { return inner(x, x); }

  RVec scale(const RVec& x, const RingElem& s) const {
    RVec out = x;
    for (auto& e : out) e = e * s;
    return out;
  }
  RVec add(const RVec& x, const RVec& y) const {
    RVec out = x;
    for (std::size_t r = 0; r < out.size(); ++r) out[r] += y[r];
    return out;
  }
  RVec combine(const std::vector<RVec>& basis, const RVec& coeffs) const {
    RVec out(u.rows(), zero());
    for (std::size_t k = 0; k < basis.size(); ++k)
      if (!coeffs[k].is_exact_zero()) out = add(out, scale(basis[k], coeffs[k]));
    return out;
  }
  RVec lift(const KVec& x) const {
    RVec out;
    for (const auto& e : x) out.push_back(RingElem::lift(ring, e));
    return out;
  }
  RingMatrix gram(const std::vector<RVec>& vs) const {
    RingMatrix g(vs.size(), vs.size(), zero());
    for (std::size_t a = 0; a < vs.size(); ++a)
      for (std::size_t b = a; b < vs.size(); ++b) g(a, b) = g(b, a) = inner(vs[a], vs[b]);
    return g;
  }

  // Residue of x/2 for an element known to be even.
  KappaElem half_residue(const RingElem& x) const { return x.shifted(-1).residue(); }

  // Root of a(t) = c0 + c1·t + c2·t² with c1 a unit and c0 ≡ 0 mod 2, by Newton iteration.
  RingElem newton_root(const RingElem& c0, const RingElem& c1, const RingElem& c2) const {
    RingElem t = zero();
    for (int iter = 0; iter < 4 * ring.precision(); ++iter) {
      const RingElem value = c0 + c1 * t + c2 * t * t;
      if (value.is_zero()) return t;
      const RingElem slope = c1 + (c2 * t).shifted(1);
      t = t - value / slope;
    }
    throw PrecisionExhausted("Hensel iteration did not converge at working precision");
  }
};

// Vectors split off the working basis, with residues spanning their image in working coordinates.
struct Split {
  std::vector<RVec> vectors;   // input coordinates
  std::vector<KVec> residues;  // rem coordinates modulo 2
};

// Replace the working basis by the complement of the split vectors: keep the basis vectors that
// complete the residues to a basis, then project them orthogonally.
std::vector<RVec> complement(const Context& ctx, const std::vector<RVec>& rem, const Split& split) {
  const ResidueField& field = ctx.ring.residue_field();
  const std::size_t r = rem.size();
  std::vector<KVec> units;
  for (std::size_t k = 0; k < r; ++k) units.push_back(kappa_unit_vec(field, r, k));
  const auto keep = extend_basis(split.residues, units, r, KappaElem::zero(field));
  const RingMatrix m = ctx.gram(split.vectors);
  // Inverse of the split Gram matrix (rank 1 or 2).
  RingMatrix minv(m.rows(), m.rows(), ctx.zero());
  if (m.rows() == 1) {
    minv(0, 0) = m(0, 0).inverse();
  } else {
    const RingElem det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const RingElem inv = det.inverse();
    minv(0, 0) = m(1, 1) * inv;
    minv(1, 1) = m(0, 0) * inv;
    minv(0, 1) = minv(1, 0) = -(m(0, 1) * inv);
  }
  std::vector<RVec> out;
  for (const auto& kv : keep) {
    std::size_t idx = 0;
    while (kv[idx].is_zero()) ++idx;
    RVec z = rem[idx];
    RVec proj(m.rows(), ctx.zero());
    for (std::size_t a = 0; a < m.rows(); ++a) proj[a] = ctx.inner(split.vectors[a], z);
    for (std::size_t a = 0; a < m.rows(); ++a) {
      RingElem coeff = ctx.zero();
      for (std::size_t b = 0; b < m.rows(); ++b) coeff += minv(a, b) * proj[b];
      z = ctx.add(z, ctx.scale(split.vectors[a], -coeff));
    }
    out.push_back(std::move(z));
  }
  return out;
}

struct ResidueData {
  Matrix<KappaElem> gbar;
  KVec diag;
  KVec e;  // characteristic vector
  RingMatrix g;
};

ResidueData residue_data(const Context& ctx, const std::vector<RVec>& rem) {
  const ResidueField& field = ctx.ring.residue_field();
  ResidueData d;
  d.g = ctx.gram(rem);
  const std::size_t r = rem.size();
  d.gbar = Matrix<KappaElem>(r, r, KappaElem::zero(field));
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b) d.gbar(a, b) = d.g(a, b).residue();
  KVec s;
  for (std::size_t a = 0; a < r; ++a) {
    d.diag.push_back(d.gbar(a, a));
    s.push_back(kappa_sqrt(d.gbar(a, a)));
  }
  const auto sol = kappa_linear_solve(d.gbar, s);
  if (!sol.particular || !sol.kernel.empty()) throw PrecisionExhausted("residue Gram matrix is singular");
  d.e = *sol.particular;
  return d;
}

bool is_zero_vec(const KVec& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

// Makes q(v) = 0 with v + t·w and rescales so the pair spans A(0,0). Inputs in input coordinates.
Split hensel_hyperbolic(const Context& ctx, RVec v, RVec w, const KVec& vbar, const KVec& wbar) {
  const RingElem qw = ctx.q(w);
  const RingElem t = ctx.newton_root(ctx.q(v).shifted(-1), ctx.inner(v, w), qw.shifted(-1));
  v = ctx.add(v, ctx.scale(w, t));
  w = ctx.scale(w, ctx.inner(v, w).inverse());
  const RingElem half = ctx.q(w).shifted(-1);
  w = ctx.add(w, ctx.scale(v, -half));
  return {{v, w}, {vbar, wbar}};
}

// Looks for a hyperbolic plane inside the span of rem.
std::optional<Split> find_hyperbolic(const Context& ctx, const std::vector<RVec>& rem) {
  const ResidueField& field = ctx.ring.residue_field();
  const KappaElem kz = KappaElem::zero(field);
  const KappaElem k1 = KappaElem::one(field);
  const std::size_t r = rem.size();
  const ResidueData d = residue_data(ctx, rem);

  // B̄ = ē^⊥ and Q1 = q/2 mod 2 on it.
  const auto bbar = additive_form_kernel(field, d.diag);
  KappaQuadraticForm q1;
  q1.field = &field;
  q1.polar = Matrix<KappaElem>(bbar.size(), bbar.size(), kz);
  for (std::size_t a = 0; a < bbar.size(); ++a) {
    const RVec x = ctx.combine(rem, ctx.lift(bbar[a]));
    q1.diag.push_back(ctx.half_residue(ctx.q(x)));
    for (std::size_t b = a + 1; b < bbar.size(); ++b)
      q1.polar(a, b) = q1.polar(b, a) = bilinear(d.gbar, bbar[a], bbar[b], kz);
  }

  std::optional<KVec> coords;  // in B̄ coordinates
  const bool e_nonzero = !is_zero_vec(d.e);
  const auto e_coords = e_nonzero ? coordinates_in(d.e, bbar, kz, k1) : std::nullopt;
  if (e_coords) {
    std::vector<KVec> units;
    for (std::size_t a = 0; a < bbar.size(); ++a) units.push_back(kappa_unit_vec(field, bbar.size(), a));
    const auto s = extend_basis({*e_coords}, units, bbar.size(), kz);
    const KappaElem qe = q1.evaluate(*e_coords);
    if (!qe.is_zero()) {
      if (!s.empty()) {
        const KappaElem c = kappa_sqrt(q1.evaluate(s[0]) / qe);
        KVec x = s[0];
        for (std::size_t a = 0; a < x.size(); ++a) x[a] = x[a] + c * (*e_coords)[a];
        coords = x;
      }
    } else {
      const auto iso = find_isotropic(q1.restrict_to(s));
      if (iso) coords = combine(s, *iso, bbar.size(), kz);
    }
  } else {
    coords = find_isotropic(q1);
  }
  if (!coords) return std::nullopt;
  const KVec xbar = combine(bbar, *coords, r, kz);

  // w̄ with ⟨x̄, w̄⟩ = 1 and ⟨ē, w̄⟩ = 0 (so that q(w) is even).
  Matrix<KappaElem> sys(e_nonzero ? 2 : 1, r, kz);
  const KVec gx = mat_vec(d.gbar, xbar, kz);
  const KVec ge = mat_vec(d.gbar, d.e, kz);
  for (std::size_t c = 0; c < r; ++c) {
    sys(0, c) = gx[c];
    if (e_nonzero) sys(1, c) = ge[c];
  }
  KVec rhs{k1};
  if (e_nonzero) rhs.push_back(kz);
  const auto sol = kappa_linear_solve(sys, rhs);
  if (!sol.particular) throw Error("no partner vector for an isotropic residue vector");
  const KVec& wbar = *sol.particular;
  return hensel_hyperbolic(ctx, ctx.combine(rem, ctx.lift(xbar)), ctx.combine(rem, ctx.lift(wbar)), xbar, wbar);
}

struct PlaneResult {
  bool hyperbolic = false;
  RVec e1, e2;
  RingElem lambda;
};

// Normal form of an even unimodular plane: A(0,0) if isotropic, else A(2, λ).
PlaneResult normalize_even_plane(const Context& ctx, RVec p1, RVec p2) {
  const ResidueField& field = ctx.ring.residue_field();
  const KappaElem kz = KappaElem::zero(field);
  const KappaElem k1 = KappaElem::one(field);
  p2 = ctx.scale(p2, ctx.inner(p1, p2).inverse());
  KappaQuadraticForm q1;
  q1.field = &field;
  q1.diag = {ctx.half_residue(ctx.q(p1)), ctx.half_residue(ctx.q(p2))};
  q1.polar = Matrix<KappaElem>{{kz, k1}, {k1, kz}};
  const std::vector<RVec> basis{p1, p2};
  PlaneResult out;
  if (const auto iso = find_isotropic(q1)) {
    // Partner: ⟨x̄, w̄⟩ = 1 with polar [[0,1],[1,0]] gives w̄ = (1/x₂, 0) or (0, 1/x₁).
    KVec wbar = (*iso)[1].is_zero() ? KVec{kz, (*iso)[0].inverse()} : KVec{(*iso)[1].inverse(), kz};
    const Split s = hensel_hyperbolic(ctx, ctx.combine(basis, ctx.lift(*iso)), ctx.combine(basis, ctx.lift(wbar)),
                                      *iso, wbar);
    out.hyperbolic = true;
    out.e1 = s.vectors[0];
    out.e2 = s.vectors[1];
    out.lambda = ctx.zero();
    return out;
  }
  const bool first = !q1.diag[0].is_zero();
  RVec x = first ? p1 : p2;
  RVec z = first ? p2 : p1;
  x = ctx.scale(x, RingElem::lift(ctx.ring, kappa_sqrt((first ? q1.diag[0] : q1.diag[1]).inverse())));
  // q(x + t z) = 2.
  const RingElem two = RingElem::from_int(ctx.ring, 2);
  const RingElem t = ctx.newton_root((ctx.q(x) - two).shifted(-1), ctx.inner(x, z), ctx.q(z).shifted(-1));
  x = ctx.add(x, ctx.scale(z, t));
  z = ctx.scale(z, ctx.inner(x, z).inverse());
  out.e1 = x;
  out.e2 = z;
  out.lambda = ctx.q(z);
  return out;
}

RVec unit_column(const Context& ctx, std::size_t n, std::size_t k) {
  RVec v(n, ctx.zero());
  v[k] = ctx.one();
  return v;
}

}  // namespace

RingMatrix plane_gram(const RingElem& a, const RingElem& b) {
  const RingDescriptor& ring = a.ring() ? *a.ring() : *b.ring();
  const RingElem one = RingElem::from_int(ring, 1);
  return RingMatrix{{a, one}, {one, b}};
}

UnimodularProfile unimodular_normal_form(const RingMatrix& unimodular) {
  const std::size_t n = unimodular.rows();
  if (n == 0 || !unimodular.square()) throw InvalidInput("normal form needs a nonempty square block");
  if (!unimodular(0, 0).ring()) throw InvalidInput("normal form needs ring-attached entries");
  if (!is_unimodular(unimodular)) throw InvalidInput("block is not unimodular");
  const RingDescriptor& ring = *unimodular(0, 0).ring();
  const Context ctx{ring, unimodular};
  const ResidueField& field = ring.residue_field();

  UnimodularProfile profile;
  profile.rank = n;
  profile.parity = parity_type(unimodular);
  profile.norm_valuation = profile.parity == Parity::I ? 0 : 1;
  profile.weight_valuation = 1;
  profile.weight_ideal_valuation = profile.parity == Parity::I ? 0 : 1;

  std::vector<RVec> rem;
  for (std::size_t k = 0; k < n; ++k) rem.push_back(unit_column(ctx, n, k));
  std::vector<RVec> witness;
  std::vector<RingMatrix> blocks;
  const RingElem zero = ctx.zero();

  while (rem.size() >= 3) {
    const auto split = find_hyperbolic(ctx, rem);
    if (!split) {
      if (rem.size() >= 5) throw Error("no hyperbolic plane found in a unimodular lattice of rank at least 5");
      break;
    }
    rem = complement(ctx, rem, *split);
    witness.insert(witness.end(), split->vectors.begin(), split->vectors.end());
    blocks.push_back(plane_gram(zero, zero));
    ++profile.hyperbolic_planes;
  }

  auto absorb_even_plane = [&](const std::vector<RVec>& plane) {
    const PlaneResult pr = normalize_even_plane(ctx, plane[0], plane[1]);
    witness.push_back(pr.e1);
    witness.push_back(pr.e2);
    if (pr.hyperbolic) {
      blocks.push_back(plane_gram(zero, zero));
      return false;
    }
    blocks.push_back(plane_gram(RingElem::from_int(ring, 2), pr.lambda));
    profile.k_lambda = pr.lambda;
    return true;
  };

  if (profile.parity == Parity::II) {
    if (rem.size() != 2) throw Error("even unimodular lattice left an odd-rank core");
    const PlaneResult pr = normalize_even_plane(ctx, rem[0], rem[1]);
    witness.push_back(pr.e1);
    witness.push_back(pr.e2);
    const RingElem a = pr.hyperbolic ? zero : RingElem::from_int(ring, 2);
    profile.terminal = std::make_pair(a, pr.lambda);
    blocks.push_back(plane_gram(a, pr.lambda));
  } else {
    const ResidueData d = residue_data(ctx, rem);
    const RVec x0 = ctx.combine(rem, ctx.lift(d.e));
    std::vector<RingMatrix> core;
    std::vector<RVec> core_vectors;
    Split split;
    if (rem.size() % 2 == 1) {
      const RingElem u = ctx.q(x0);
      const RVec x = ctx.scale(x0, unit_sqrt_mod2(u).inverse());
      profile.kprime_epsilon = ctx.q(x);
      split = {{x}, {d.e}};
      core_vectors = {x};
      core.push_back(RingMatrix{{*profile.kprime_epsilon}});
    } else {
      const KappaElem kz = KappaElem::zero(field);
      Matrix<KappaElem> sys(1, rem.size(), kz);
      const KVec ge = mat_vec(d.gbar, d.e, kz);
      for (std::size_t c = 0; c < rem.size(); ++c) sys(0, c) = ge[c];
      const auto sol = kappa_linear_solve(sys, KVec{KappaElem::one(field)});
      const KVec ybar = *sol.particular;
      RVec y = ctx.combine(rem, ctx.lift(ybar));
      y = ctx.scale(y, ctx.inner(x0, y).inverse());
      const RingElem v = unit_sqrt_mod2(ctx.q(y));
      y = ctx.scale(y, v.inverse());
      const RVec x = ctx.scale(x0, v);
      profile.kprime_epsilon = ctx.q(y);
      profile.kprime_gamma = ctx.q(x).shifted(-1);
      split = {{y, x}, {ybar, d.e}};
      core_vectors = {y, x};
      core.push_back(plane_gram(*profile.kprime_epsilon, ctx.q(x)));
    }
    const std::vector<RVec> rest = complement(ctx, rem, split);
    if (rest.size() == 2 && !absorb_even_plane(rest)) ++profile.hyperbolic_planes;
    witness.insert(witness.end(), core_vectors.begin(), core_vectors.end());
    blocks.insert(blocks.end(), core.begin(), core.end());
  }

  profile.witness = RingMatrix(n, n, zero);
  for (std::size_t c = 0; c < witness.size(); ++c) profile.witness.set_col(c, witness[c]);
  profile.assembled = RingMatrix(n, n, zero);
  std::size_t off = 0;
  for (const auto& b : blocks) {
    for (std::size_t a = 0; a < b.rows(); ++a)
      for (std::size_t c = 0; c < b.cols(); ++c) profile.assembled(off + a, off + c) = b(a, c);
    off += b.rows();
  }
  return profile;
}

}  // namespace latdens

#include "latdens/kappa_forms.hpp"

#include "latdens/errors.hpp"

namespace latdens {

KVec kappa_zero_vec(const ResidueField& field, std::size_t dim) { return KVec(dim, KappaElem::zero(field)); }

KVec kappa_unit_vec(const ResidueField& field, std::size_t dim, std::size_t index) {
  KVec v = kappa_zero_vec(field, dim);
  v[index] = KappaElem::one(field);
  return v;
}

LinearSolution<KappaElem> kappa_linear_solve(const Matrix<KappaElem>& m, const KVec& rhs) {
  const ResidueField& field = m.rows() && m.cols() ? m(0, 0).field() : ResidueField::prime_field();
  return linear_solve(m, rhs, KappaElem::zero(field), KappaElem::one(field));
}

std::vector<KVec> additive_form_kernel(const ResidueField& field, const KVec& coeffs) {
  Matrix<KappaElem> row(1, coeffs.size(), KappaElem::zero(field));
  for (std::size_t j = 0; j < coeffs.size(); ++j) row(0, j) = kappa_sqrt(coeffs[j]);
  return kernel_basis(row, KappaElem::zero(field), KappaElem::one(field));
}

std::optional<KappaElem> solve_artin_schreier(const KappaElem& d) {
  const ResidueField& field = d.field();
  const int f = field.degree();
  // z ↦ z² + z is F_2-linear; solve over F_2 with the coordinate bits of κ.
  std::vector<std::uint32_t> columns(f);
  for (int i = 0; i < f; ++i) {
    const std::uint32_t z = 1u << i;
    columns[i] = field.mul(z, z) ^ z;
  }
  // Rows of the augmented system: bit r of image = Σ_i bit r of columns[i]·z_i.
  std::vector<std::uint64_t> rows(f, 0);
  for (int r = 0; r < f; ++r) {
    for (int i = 0; i < f; ++i)
      if ((columns[i] >> r) & 1u) rows[r] |= std::uint64_t{1} << i;
    if ((d.bits() >> r) & 1u) rows[r] |= std::uint64_t{1} << f;
  }
  std::vector<int> pivot_of_row;
  int rank = 0;
  for (int c = 0; c < f && rank < f; ++c) {
    int p = rank;
    while (p < f && !((rows[p] >> c) & 1u)) ++p;
    if (p == f) continue;
    std::swap(rows[p], rows[rank]);
    for (int r = 0; r < f; ++r)
      if (r != rank && ((rows[r] >> c) & 1u)) rows[r] ^= rows[rank];
    pivot_of_row.push_back(c);
    ++rank;
  }
  for (int r = rank; r < f; ++r)
    if ((rows[r] >> f) & 1u) return std::nullopt;
  std::uint32_t z = 0;
  for (int r = 0; r < rank; ++r)
    if ((rows[r] >> f) & 1u) z |= 1u << pivot_of_row[r];
  return KappaElem(field, z);
}

std::vector<KappaElem> solve_quadratic(const KappaElem& a, const KappaElem& b, const KappaElem& c) {
  if (a.is_zero()) {
    if (b.is_zero()) throw InvalidInput("degenerate quadratic equation");
    return {c / b};
  }
  if (b.is_zero()) return {kappa_sqrt(c / a)};
  // y = (b/a)·z turns the equation into z² + z = a·c/b².
  const auto z = solve_artin_schreier(a * c / (b * b));
  if (!z) return {};
  const KappaElem y0 = (b / a) * *z;
  return {y0, y0 + b / a};
}

KappaElem KappaQuadraticForm::evaluate(const KVec& x) const {
  KappaElem acc = KappaElem::zero(*field);
  for (std::size_t a = 0; a < x.size(); ++a) {
    if (x[a].is_zero()) continue;
    acc = acc + x[a] * x[a] * diag[a];
    for (std::size_t b = a + 1; b < x.size(); ++b) acc = acc + x[a] * x[b] * polar(a, b);
  }
  return acc;
}

KappaElem KappaQuadraticForm::polar_value(const KVec& x, const KVec& y) const {
  return bilinear(polar, x, y, KappaElem::zero(*field));
}

KappaQuadraticForm KappaQuadraticForm::restrict_to(const std::vector<KVec>& basis) const {
  KappaQuadraticForm out;
  out.field = field;
  const KappaElem zero = KappaElem::zero(*field);
  out.polar = Matrix<KappaElem>(basis.size(), basis.size(), zero);
  for (std::size_t a = 0; a < basis.size(); ++a) {
    out.diag.push_back(evaluate(basis[a]));
    for (std::size_t b = a + 1; b < basis.size(); ++b) {
      out.polar(a, b) = polar_value(basis[a], basis[b]);
      out.polar(b, a) = out.polar(a, b);
    }
  }
  return out;
}

KappaQuadraticForm make_kappa_form(const ResidueField& field, const KVec& diag, const Matrix<KappaElem>& polar) {
  KappaQuadraticForm q;
  q.field = &field;
  q.diag = diag;
  q.polar = polar;
  for (std::size_t a = 0; a < diag.size(); ++a) q.polar(a, a) = KappaElem::zero(field);
  return q;
}

std::vector<KVec> polar_radical(const KappaQuadraticForm& q) {
  if (q.dim() == 0) return {};
  return kernel_basis(q.polar, KappaElem::zero(*q.field), KappaElem::one(*q.field));
}

std::vector<KVec> quadratic_kernel(const KappaQuadraticForm& q) {
  const std::vector<KVec> rad = polar_radical(q);
  KVec values;
  for (const auto& r : rad) values.push_back(q.evaluate(r));
  std::vector<KVec> out;
  for (const auto& c : additive_form_kernel(*q.field, values))
    out.push_back(combine(rad, c, q.dim(), KappaElem::zero(*q.field)));
  return out;
}

bool is_nonsingular(const KappaQuadraticForm& q) { return quadratic_kernel(q).empty(); }

SymplecticDecomposition symplectic_decompose(const KappaQuadraticForm& q) {
  SymplecticDecomposition out;
  std::vector<KVec> rest;
  for (std::size_t a = 0; a < q.dim(); ++a) rest.push_back(kappa_unit_vec(*q.field, q.dim(), a));
  while (!rest.empty()) {
    KVec u = rest.back();
    rest.pop_back();
    std::size_t partner = rest.size();
    for (std::size_t k = 0; k < rest.size(); ++k)
      if (!q.polar_value(u, rest[k]).is_zero()) {
        partner = k;
        break;
      }
    if (partner == rest.size()) {
      out.radical.push_back(u);
      continue;
    }
    KVec v = rest[partner];
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(partner));
    const KappaElem s = q.polar_value(u, v).inverse();
    for (auto& x : v) x = x * s;
    for (auto& z : rest) {
      const KappaElem alpha = q.polar_value(z, v);
      const KappaElem beta = q.polar_value(z, u);
      for (std::size_t r = 0; r < z.size(); ++r) z[r] = z[r] - alpha * u[r] - beta * v[r];
    }
    out.pairs.emplace_back(std::move(u), std::move(v));
  }
  return out;
}

KappaElem arf_invariant(const KappaQuadraticForm& q) {
  const SymplecticDecomposition s = symplectic_decompose(q);
  if (!s.radical.empty()) throw Error("Arf invariant requires a nondegenerate polar form");
  KappaElem acc = KappaElem::zero(*q.field);
  for (const auto& [u, v] : s.pairs) acc = acc + q.evaluate(u) * q.evaluate(v);
  return acc;
}

OrthogonalClass arf_class(const KappaQuadraticForm& q) {
  if (q.dim() % 2 != 0) throw OddDimension("Arf class needs an even-dimensional form");
  return kappa_trace(arf_invariant(q)) == 0 ? OrthogonalClass::Split : OrthogonalClass::Nonsplit;
}

OrthogonalClass residue_form_class(const KappaQuadraticForm& q) {
  return q.dim() % 2 ? OrthogonalClass::OddDimensional : arf_class(q);
}

std::optional<KVec> find_isotropic(const KappaQuadraticForm& q) {
  const ResidueField& field = *q.field;
  const std::size_t dim = q.dim();
  const SymplecticDecomposition s = symplectic_decompose(q);
  auto scaled = [&](const KVec& v, const KappaElem& c) {
    KVec out = v;
    for (auto& x : out) x = x * c;
    return out;
  };
  auto add = [&](const KVec& a, const KVec& b) {
    KVec out = a;
    for (std::size_t r = 0; r < dim; ++r) out[r] = out[r] + b[r];
    return out;
  };
  // Radical part: Q is additive there.
  KVec rad_values;
  for (const auto& r : s.radical) rad_values.push_back(q.evaluate(r));
  const auto rad_kernel = additive_form_kernel(field, rad_values);
  if (!rad_kernel.empty()) return combine(s.radical, rad_kernel.front(), dim, KappaElem::zero(field));

  // Each pair spans a plane; an isotropic plane yields a vector directly.
  for (const auto& [u, v] : s.pairs) {
    const KappaElem qu = q.evaluate(u);
    const KappaElem qv = q.evaluate(v);
    if (qu.is_zero()) return u;
    if (qv.is_zero()) return v;
    const auto roots = solve_quadratic(qv, KappaElem::one(field), qu);
    if (!roots.empty()) return add(u, scaled(v, roots.front()));
  }
  // Two anisotropic planes: a + b with Q(a) = Q(b) = 1.
  if (s.pairs.size() >= 2) {
    const KVec& v1 = s.pairs[0].second;
    const KVec& v2 = s.pairs[1].second;
    const KVec a = scaled(v1, kappa_sqrt(q.evaluate(v1).inverse()));
    const KVec b = scaled(v2, kappa_sqrt(q.evaluate(v2).inverse()));
    return add(a, b);
  }
  // Anisotropic plane plus an anisotropic radical vector r: y·v + r with y² Q(v) = Q(r).
  if (s.pairs.size() == 1 && !s.radical.empty()) {
    const KVec& v1 = s.pairs[0].second;
    const KVec& r = s.radical.front();
    return add(scaled(v1, kappa_sqrt(q.evaluate(r) / q.evaluate(v1))), r);
  }
  return std::nullopt;
}

std::uint64_t count_zeros(const KappaQuadraticForm& q) {
  const ResidueField& field = *q.field;
  const std::uint64_t card = field.cardinality();
  std::uint64_t total = 1;
  for (std::size_t a = 0; a < q.dim(); ++a) total *= card;
  std::uint64_t zeros = 0;
  KVec x = kappa_zero_vec(field, q.dim());
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t t = idx;
    for (std::size_t a = 0; a < q.dim(); ++a) {
      x[a] = KappaElem(field, static_cast<std::uint32_t>(t % card));
      t /= card;
    }
    if (q.evaluate(x).is_zero()) ++zeros;
  }
  return zeros;
}

const char* to_string(OrthogonalClass c) {
  switch (c) {
    case OrthogonalClass::OddDimensional: return "odd";
    case OrthogonalClass::Split: return "split";
    case OrthogonalClass::Nonsplit: return "nonsplit";
  }
  return "?";
}

}  // namespace latdens

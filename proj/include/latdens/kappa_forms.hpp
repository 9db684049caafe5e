#pragma once

#include "latdens/field_linalg.hpp"
#include "latdens/residue_field.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace latdens {

using KVec = std::vector<KappaElem>;

KVec kappa_zero_vec(const ResidueField& field, std::size_t dim);
KVec kappa_unit_vec(const ResidueField& field, std::size_t dim, std::size_t index);

LinearSolution<KappaElem> kappa_linear_solve(const Matrix<KappaElem>& m, const KVec& rhs);

// Kernel of x ↦ Σ c_j x_j², i.e. of the linear functional with coefficients √c_j.
std::vector<KVec> additive_form_kernel(const ResidueField& field, const KVec& coeffs);

// A root of z² + z = d, if any (exists iff Tr(d) = 0).
std::optional<KappaElem> solve_artin_schreier(const KappaElem& d);

// Roots of a·y² + b·y + c = 0 (not all of a, b zero).
std::vector<KappaElem> solve_quadratic(const KappaElem& a, const KappaElem& b, const KappaElem& c);

// Quadratic form over κ given by its values on a basis and its polar form.
struct KappaQuadraticForm {
  const ResidueField* field = &ResidueField::prime_field();
  KVec diag;
  Matrix<KappaElem> polar;

  std::size_t dim() const { return diag.size(); }
  KappaElem evaluate(const KVec& x) const;
  KappaElem polar_value(const KVec& x, const KVec& y) const;
  KappaQuadraticForm restrict_to(const std::vector<KVec>& basis) const;
};

KappaQuadraticForm make_kappa_form(const ResidueField& field, const KVec& diag, const Matrix<KappaElem>& polar);

std::vector<KVec> polar_radical(const KappaQuadraticForm& q);
// {x in the polar radical : Q(x) = 0}.
std::vector<KVec> quadratic_kernel(const KappaQuadraticForm& q);
bool is_nonsingular(const KappaQuadraticForm& q);

struct SymplecticDecomposition {
  std::vector<std::pair<KVec, KVec>> pairs;  // polar(u, v) = 1, mutually orthogonal
  std::vector<KVec> radical;
};
SymplecticDecomposition symplectic_decompose(const KappaQuadraticForm& q);

enum class OrthogonalClass { OddDimensional, Split, Nonsplit };

// Σ Q(u_j)Q(v_j) over a symplectic basis; requires a nondegenerate polar form.
KappaElem arf_invariant(const KappaQuadraticForm& q);
// Split iff the trace of the Arf invariant vanishes. Throws OddDimension for odd dimension.
OrthogonalClass arf_class(const KappaQuadraticForm& q);
// Odd dimension maps to OddDimensional; even dimension is classified by arf_class (dimension 0 is split).
OrthogonalClass residue_form_class(const KappaQuadraticForm& q);

// Nonzero x with Q(x) = 0, if one exists.
std::optional<KVec> find_isotropic(const KappaQuadraticForm& q);

// Number of zeros of Q by enumeration; only for small q^dim.
std::uint64_t count_zeros(const KappaQuadraticForm& q);

const char* to_string(OrthogonalClass c);

}  // namespace latdens

#pragma once

#include "latdens/matrix.hpp"

#include <concepts>
#include <cstddef>
#include <optional>
#include <vector>

namespace latdens {

template <class F>
concept FieldElement = std::regular<F> && requires(const F& a, const F& b) {
  { a + b } -> std::convertible_to<F>;
  { a - b } -> std::convertible_to<F>;
  { a * b } -> std::convertible_to<F>;
  { a / b } -> std::convertible_to<F>;
  { a.is_zero() } -> std::convertible_to<bool>;
};

template <class F>
using Vec = std::vector<F>;

template <class F>
struct RowEchelon {
  Matrix<F> reduced;
  std::vector<std::size_t> pivot_cols;
};

// Reduced row echelon form by Gauss-Jordan elimination.
template <FieldElement F>
RowEchelon<F> row_reduce(Matrix<F> m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c).is_zero()) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m(p, k), m(r, k));
    const F lead = m(r, c);
    for (std::size_t k = c; k < m.cols(); ++k) m(r, k) = m(r, k) / lead;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      const F factor = m(i, c);
      for (std::size_t k = c; k < m.cols(); ++k) m(i, k) = m(i, k) - factor * m(r, k);
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(pivots)};
}

template <class F>
struct LinearSolution {
  std::vector<Vec<F>> kernel;
  std::optional<Vec<F>> particular;
};

// Solves m·x = rhs. zero and one fix the field instance.
template <FieldElement F>
LinearSolution<F> linear_solve(const Matrix<F>& m, const Vec<F>& rhs, const F& zero, const F& one) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  Matrix<F> aug(rows, cols + 1, zero);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) aug(i, j) = m(i, j);
    aug(i, cols) = rhs.empty() ? zero : rhs[i];
  }
  RowEchelon<F> ech = row_reduce(std::move(aug));
  LinearSolution<F> out;
  std::vector<bool> is_pivot(cols, false);
  bool consistent = true;
  for (std::size_t k = 0; k < ech.pivot_cols.size(); ++k) {
    if (ech.pivot_cols[k] == cols) consistent = false;
    else is_pivot[ech.pivot_cols[k]] = true;
  }
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    Vec<F> v(cols, zero);
    v[free] = one;
    for (std::size_t k = 0; k < ech.pivot_cols.size(); ++k) {
      const std::size_t pc = ech.pivot_cols[k];
      if (pc < cols) v[pc] = zero - ech.reduced(k, free);
    }
    out.kernel.push_back(std::move(v));
  }
  if (consistent) {
    Vec<F> x(cols, zero);
    for (std::size_t k = 0; k < ech.pivot_cols.size(); ++k) x[ech.pivot_cols[k]] = ech.reduced(k, cols);
    out.particular = std::move(x);
  }
  return out;
}

template <FieldElement F>
std::vector<Vec<F>> kernel_basis(const Matrix<F>& m, const F& zero, const F& one) {
  return linear_solve(m, Vec<F>{}, zero, one).kernel;
}

// Matrix whose columns are the given vectors.
template <class F>
Matrix<F> columns_to_matrix(const std::vector<Vec<F>>& vecs, std::size_t dim, const F& zero) {
  Matrix<F> m(dim, vecs.size(), zero);
  for (std::size_t c = 0; c < vecs.size(); ++c)
    for (std::size_t r = 0; r < dim; ++r) m(r, c) = vecs[c][r];
  return m;
}

template <FieldElement F>
std::size_t span_rank(const std::vector<Vec<F>>& vecs, std::size_t dim, const F& zero) {
  if (vecs.empty()) return 0;
  return row_reduce(columns_to_matrix(vecs, dim, zero).transpose()).pivot_cols.size();
}

template <FieldElement F>
bool in_span(const Vec<F>& v, const std::vector<Vec<F>>& basis, const F& zero) {
  std::vector<Vec<F>> ext = basis;
  ext.push_back(v);
  return span_rank(ext, v.size(), zero) == span_rank(basis, v.size(), zero);
}

// Coordinates of v in the given linearly independent vectors, or nullopt if v is outside their span.
template <FieldElement F>
std::optional<Vec<F>> coordinates_in(const Vec<F>& v, const std::vector<Vec<F>>& basis, const F& zero,
                                     const F& one) {
  if (basis.empty()) {
    for (const auto& x : v)
      if (!x.is_zero()) return std::nullopt;
    return Vec<F>{};
  }
  return linear_solve(columns_to_matrix(basis, v.size(), zero), v, zero, one).particular;
}

// Vectors from candidates that extend sub to a basis of span(sub ∪ candidates).
template <FieldElement F>
std::vector<Vec<F>> extend_basis(const std::vector<Vec<F>>& sub, const std::vector<Vec<F>>& candidates,
                                 std::size_t dim, const F& zero) {
  std::vector<Vec<F>> acc = sub;
  std::vector<Vec<F>> added;
  std::size_t r = span_rank(acc, dim, zero);
  for (const auto& c : candidates) {
    acc.push_back(c);
    const std::size_t r2 = span_rank(acc, dim, zero);
    if (r2 > r) {
      added.push_back(c);
      r = r2;
    } else {
      acc.pop_back();
    }
  }
  return added;
}

template <FieldElement F>
Vec<F> combine(const std::vector<Vec<F>>& vecs, const Vec<F>& coeffs, std::size_t dim, const F& zero) {
  Vec<F> out(dim, zero);
  for (std::size_t k = 0; k < vecs.size(); ++k)
    for (std::size_t r = 0; r < dim; ++r) out[r] = out[r] + coeffs[k] * vecs[k][r];
  return out;
}

template <FieldElement F>
Vec<F> mat_vec(const Matrix<F>& m, const Vec<F>& v, const F& zero) {
  Vec<F> out(m.rows(), zero);
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out[r] = out[r] + m(r, c) * v[c];
  return out;
}

template <FieldElement F>
F bilinear(const Matrix<F>& g, const Vec<F>& x, const Vec<F>& y, const F& zero) {
  F acc = zero;
  for (std::size_t r = 0; r < g.rows(); ++r) {
    if (x[r].is_zero()) continue;
    for (std::size_t c = 0; c < g.cols(); ++c) acc = acc + x[r] * g(r, c) * y[c];
  }
  return acc;
}

}  // namespace latdens

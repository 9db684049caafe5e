#pragma once

#include "latdens/base_ring.hpp"
#include "latdens/matrix.hpp"

#include <cstdint>
#include <vector>

namespace latdens {

enum class Parity { I, II };
const char* to_string(Parity p);

using RingMatrix = Matrix<RingElem>;

RingMatrix ring_identity(const RingDescriptor& ring, std::size_t n);
RingMatrix ring_matrix(const RingDescriptor& ring, const Matrix<std::int64_t>& m);
RingMatrix ring_matrix(const RingDescriptor& ring, const Matrix<Rational>& m);
RingMatrix ring_multiply(const RingMatrix& a, const RingMatrix& b);
// tᵀ·g·t
RingMatrix ring_congruence(const RingMatrix& g, const RingMatrix& t);
// Entrywise agreement modulo 2^bits (measured in absolute precision).
bool agree_mod(const RingMatrix& a, const RingMatrix& b, int bits);

// Quadratic lattice (L, q) given by its Gram matrix ⟨e_j, e_k⟩; the diagonal holds q(e_j).
class QuadLattice {
 public:
  QuadLattice(const RingDescriptor& ring, RingMatrix gram);
  static QuadLattice from_integers(const RingDescriptor& ring, const Matrix<std::int64_t>& gram);

  const RingDescriptor& ring() const { return *ring_; }
  std::size_t rank() const { return gram_.rows(); }
  const RingMatrix& gram() const { return gram_; }

  // Same module with q replaced by 2^k·q.
  QuadLattice scaled(int k) const;
  // Lattice spanned by the columns of t.
  QuadLattice transformed(const RingMatrix& t) const;

 private:
  const RingDescriptor* ring_;
  RingMatrix gram_;
};

int norm_ideal(const RingMatrix& gram);
int norm_ideal(const QuadLattice& lattice);
int scale_ideal(const RingMatrix& gram);
int scale_ideal(const QuadLattice& lattice);

struct Discriminant {
  int valuation = 0;
  std::vector<std::uint64_t> unit_mod8;  // coordinates of the unit part modulo 8
};
Discriminant discriminant(const QuadLattice& lattice);

Parity parity_type(const RingMatrix& unimodular);
bool is_unimodular(const RingMatrix& gram);

struct JordanConstituent {
  int scale = 0;
  RingMatrix unimodular;  // Gram block divided by 2^scale
  Parity parity = Parity::II;
  std::size_t rank() const { return unimodular.rows(); }
};

struct JordanSymbol {
  const RingDescriptor* ring = nullptr;
  std::vector<JordanConstituent> constituents;  // strictly increasing scales
  RingMatrix basis;                             // columns: new basis in input coordinates
  RingElem determinant;

  std::size_t rank() const { return basis.rows(); }
  const JordanConstituent* at_scale(int scale) const;
  // Absent constituents count as parity II.
  Parity parity_at(int scale) const;
  std::size_t rank_at(int scale) const;
  // Column offset of the constituent at position k within the Jordan basis.
  std::size_t offset(std::size_t k) const;
};

JordanSymbol jordan_split(const QuadLattice& lattice);
// Block-diagonal assembly of 2^i·U_i.
RingMatrix block_assembly(const JordanSymbol& symbol);

}  // namespace latdens

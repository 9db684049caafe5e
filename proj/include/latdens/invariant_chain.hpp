#pragma once

#include "latdens/kappa_forms.hpp"
#include "latdens/lattice.hpp"

#include <map>
#include <optional>
#include <vector>

namespace latdens {

enum class FineType { IOdd, IEven1, IEven2, IEvenBound, II };
const char* to_string(FineType t);

// Subspaces of A_i/2A_i ≅ κ^n (coordinates in the Jordan basis) cutting out the chain lattices at scale i.
struct ChainSpaces {
  int scale = 0;
  std::size_t ambient = 0;  // n = dim A_i/2A_i
  std::vector<KVec> b, w, x, y, z;
  KVec characteristic;      // ē, zero when B_i = A_i
};

struct ResidueSpace {
  int scale = 0;
  std::vector<KVec> basis;  // representatives in A_i/2A_i of a basis of B_i/Z_i
  KappaQuadraticForm form;  // q̄_i = q/2^{i+1} mod 2
  OrthogonalClass cls = OrthogonalClass::Split;
  bool nonsingular = true;
  std::size_t dim() const { return basis.size(); }
};

struct ScaleChain {
  ChainSpaces spaces;
  ResidueSpace residue;
};

struct ConstituentType {
  int scale = 0;
  std::size_t rank = 0;
  Parity parity = Parity::II;
  FineType type = FineType::II;
  bool bound = false;
  std::size_t vbar_dim = 0;
  OrthogonalClass vbar_class = OrthogonalClass::Split;
};

struct ChainReport {
  std::vector<ScaleChain> scales;  // every scale from (min − 1) to (max + 1)
  std::vector<ConstituentType> constituents;
  int alpha = 0;
  int beta = 0;
  const ScaleChain* at_scale(int scale) const;
};

ScaleChain chain_at_scale(const JordanSymbol& symbol, int scale);
std::vector<ScaleChain> chain_compute(const JordanSymbol& symbol);
std::vector<ConstituentType> classify(const JordanSymbol& symbol, const std::vector<ScaleChain>& chain);
ChainReport analyze_chain(const JordanSymbol& symbol);

// Basis (columns, Jordan coordinates) of the lattice M with 2A_i ⊆ M ⊆ A_i and M/2A_i spanned by `sub`.
RingMatrix chain_lattice_basis(const JordanSymbol& symbol, int scale, const std::vector<KVec>& sub);

// dim V̄_i predicted from the constituent type; n = 0 stands for an absent constituent (parity II).
std::size_t expected_vbar_dimension(Parity parity, std::size_t rank, bool bound, std::optional<FineType> type);

int alpha(const std::vector<ConstituentType>& types);
// Parity by scale; absent scales count as parity II.
using ParityMap = std::map<int, Parity>;
ParityMap parity_map(const std::vector<ConstituentType>& types);
// Number of j with L_j of parity I and L_{j+2} of parity II.
int beta_direct(const ParityMap& parities);
// Number of maximal runs of parity I in the even-scale and odd-scale subsequences.
int beta_run_count(const ParityMap& parities);
int beta(const std::vector<ConstituentType>& types);

}  // namespace latdens

#pragma once

#include "latdens/lattice.hpp"

#include <optional>
#include <utility>

namespace latdens {

// Orthogonal decomposition of a unimodular lattice into hyperbolic planes A(0,0) and a small core.
// A(a, b) denotes the plane with Gram [[a, 1], [1, b]].
struct UnimodularProfile {
  Parity parity = Parity::II;
  std::size_t rank = 0;
  std::size_t hyperbolic_planes = 0;

  // Parity I: K = A(2, λ) if present; K′ = (ε) or [[ε, 1], [1, 2γ]] with ε ≡ 1 mod 2.
  std::optional<RingElem> k_lambda;
  std::optional<RingElem> kprime_epsilon;
  std::optional<RingElem> kprime_gamma;

  // Parity II: the last plane A(a, b) with a, b ∈ (2).
  std::optional<std::pair<RingElem, RingElem>> terminal;

  // Valuations of the norm generator, the weight generator and M(L).
  int norm_valuation = 0;
  int weight_valuation = 0;
  int weight_ideal_valuation = 0;

  RingMatrix witness;    // columns: normal-form basis in input coordinates
  RingMatrix assembled;  // Gram matrix of the normal form
};

UnimodularProfile unimodular_normal_form(const RingMatrix& unimodular);

// Gram matrix [[a, 1], [1, b]].
RingMatrix plane_gram(const RingElem& a, const RingElem& b);

}  // namespace latdens

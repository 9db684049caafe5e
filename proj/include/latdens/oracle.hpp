#pragma once

#include "latdens/matrix.hpp"
#include "latdens/rational.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace latdens {

// Symmetric Gram matrix over (ring of integers of the unramified extension of Q_p of degree f) mod p^N.
// Entries are coordinate vectors of length f in the power basis of the modulus; odd p requires f = 1.
struct OracleProblem {
  std::uint64_t p = 2;
  int degree = 1;
  std::vector<std::int64_t> modulus;  // lower coefficients of the monic modulus; empty selects the default
  Matrix<std::vector<std::int64_t>> gram;

  static OracleProblem from_integers(const Matrix<std::int64_t>& gram, std::uint64_t p = 2);
  std::size_t rank() const { return gram.rows(); }
};

struct OracleOptions {
  int split_depth = 2;
  int jobs = 1;
  std::uint64_t node_budget = 100'000'000;
};

// Throws BudgetExceeded when the problem is outside the supported size.
void check_oracle_budget(const OracleProblem& problem, int levels);

// counts[k − 1] = #{X mod p^k : XᵀGX ≡ G mod p^k} for k = 1..levels.
std::vector<BigInt> count_levels(const OracleProblem& problem, int levels, const OracleOptions& options = {});
BigInt count_solutions(const OracleProblem& problem, int level, const OracleOptions& options = {});

struct StabilizationReport {
  std::vector<BigInt> counts;
  std::vector<Rational> ratios;  // c(k) = count_k / q^{k·n(n−1)/2}
  int first_admissible_level = 3;
  bool stabilized = false;
  int stabilized_level = 0;
  Rational value;
};

// Valuation of det G (capped at the working level).
int oracle_det_valuation(const OracleProblem& problem, int level);
StabilizationReport density_estimate(const OracleProblem& problem, int max_level, const OracleOptions& options = {});
// The stabilized value; throws NotStabilized otherwise.
Rational stabilized_value(const StabilizationReport& report);

struct IsometrySearch {
  std::optional<Matrix<std::int64_t>> transform;  // T with Tᵀ·U₁·T ≡ U₂ mod 2^bits
  int deepest_level = 0;                          // last level with a surviving candidate
  std::uint64_t nodes = 0;
};

// Exhaustive 2-adic search over T mod 2^bits, rank ≤ 3 and bits ≤ 6.
IsometrySearch brute_isometry(const Matrix<std::int64_t>& u1, const Matrix<std::int64_t>& u2, int bits,
                              std::uint64_t node_budget = 50'000'000);

}  // namespace latdens

#include "latdens/oracle.hpp"

#include "latdens/base_ring.hpp"
#include "latdens/errors.hpp"
#include "latdens/field_linalg.hpp"
#include "latdens/kappa_forms.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <thread>

namespace latdens {
namespace {

constexpr int kMaxOracleDegree = 4;
using Elem = std::array<std::uint64_t, kMaxOracleDegree>;

// Z[w]/(p^N, modulus(w)) with coefficients in [0, p^N).
struct TruncRing {
  std::uint64_t p = 2;
  int f = 1;
  int level = 1;
  std::uint64_t modulus_value = 2;  // p^level
  std::array<std::uint64_t, kMaxOracleDegree> neg_modulus{};

  std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) const {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % modulus_value);
  }
  Elem add(const Elem& a, const Elem& b) const {
    Elem r{};
    for (int i = 0; i < f; ++i) r[i] = (a[i] + b[i]) % modulus_value;
    return r;
  }
  Elem sub(const Elem& a, const Elem& b) const {
    Elem r{};
    for (int i = 0; i < f; ++i) r[i] = (a[i] + modulus_value - b[i]) % modulus_value;
    return r;
  }
  Elem mul(const Elem& a, const Elem& b) const {
    std::array<std::uint64_t, 2 * kMaxOracleDegree> prod{};
    for (int i = 0; i < f; ++i) {
      if (a[i] == 0) continue;
      for (int j = 0; j < f; ++j) prod[i + j] = (prod[i + j] + mulmod(a[i], b[j])) % modulus_value;
    }
    for (int d = 2 * f - 2; d >= f; --d) {
      const std::uint64_t t = prod[d];
      if (t == 0) continue;
      prod[d] = 0;
      for (int i = 0; i < f; ++i) prod[d - f + i] = (prod[d - f + i] + mulmod(t, neg_modulus[i])) % modulus_value;
    }
    Elem r{};
    for (int i = 0; i < f; ++i) r[i] = prod[i];
    return r;
  }
  bool is_zero(const Elem& a) const {
    for (int i = 0; i < f; ++i)
      if (a[i] != 0) return false;
    return true;
  }
  // Valuation of a nonzero element; level when zero.
  int valuation(const Elem& a) const {
    int best = level;
    for (int i = 0; i < f; ++i) {
      std::uint64_t x = a[i];
      if (x == 0) continue;
      int v = 0;
      while (x % p == 0) {
        x /= p;
        ++v;
      }
      best = std::min(best, v);
    }
    return best;
  }
};

std::uint64_t checked_pow(std::uint64_t p, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > (std::uint64_t{1} << 62) / p) throw BudgetExceeded("modulus p^N exceeds the oracle word size");
    r *= p;
  }
  return r;
}

TruncRing make_ring(const OracleProblem& problem, int level) {
  TruncRing ring;
  ring.p = problem.p;
  ring.f = problem.degree;
  ring.level = level;
  ring.modulus_value = checked_pow(problem.p, level);
  const auto m = problem.modulus.empty() ? RingDescriptor::default_modulus(problem.degree) : problem.modulus;
  const auto big = static_cast<std::int64_t>(ring.modulus_value);
  for (int i = 0; i < ring.f; ++i) ring.neg_modulus[i] = static_cast<std::uint64_t>(((-m[i]) % big + big) % big);
  return ring;
}

std::vector<Elem> reduce_gram(const OracleProblem& problem, const TruncRing& ring) {
  const std::size_t n = problem.rank();
  std::vector<Elem> g(n * n);
  const auto big = static_cast<std::int64_t>(ring.modulus_value);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      for (int i = 0; i < ring.f; ++i) g[r * n + c][i] = static_cast<std::uint64_t>((problem.gram(r, c)[i] % big + big) % big);
  return g;
}

void validate(const OracleProblem& problem) {
  const std::size_t n = problem.rank();
  if (n == 0 || !problem.gram.square()) throw InvalidInput("oracle needs a nonempty square Gram matrix");
  if (problem.p < 2) throw InvalidInput("oracle needs a prime");
  for (std::uint64_t d = 2; d * d <= problem.p; ++d)
    if (problem.p % d == 0) throw InvalidInput("oracle needs a prime");
  if (problem.degree < 1 || problem.degree > kMaxOracleDegree) throw InvalidInput("oracle residue degree out of range");
  if (problem.p != 2 && problem.degree != 1) throw InvalidInput("odd primes are supported over Z_p only");
  if (!problem.modulus.empty() && static_cast<int>(problem.modulus.size()) != problem.degree)
    throw InvalidInput("modulus must list exactly f lower coefficients");
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      if (static_cast<int>(problem.gram(r, c).size()) != problem.degree)
        throw InvalidInput("Gram entries must have f coordinates");
      if (problem.gram(r, c) != problem.gram(c, r)) throw InvalidInput("Gram matrix must be symmetric");
    }
}

// Residue field operations for the per-node linear systems.
struct Char2Field {
  const ResidueField* field;
  std::uint64_t size() const { return field->cardinality(); }
  KappaElem element(std::uint64_t index) const { return {*field, static_cast<std::uint32_t>(index)}; }
  KappaElem from_digits(const Elem& digits, int f) const {
    std::uint32_t bits = 0;
    for (int i = 0; i < f; ++i)
      if (digits[i] & 1u) bits |= 1u << i;
    return {*field, bits};
  }
  Elem lift(const KappaElem& x, int f) const {
    Elem e{};
    for (int i = 0; i < f; ++i) e[i] = (x.bits() >> i) & 1u;
    return e;
  }
  KappaElem zero() const { return KappaElem::zero(*field); }
  KappaElem one() const { return KappaElem::one(*field); }
};

struct OddField {
  std::uint64_t p;
  std::uint64_t size() const { return p; }
  PrimeElem element(std::uint64_t index) const { return {index, p}; }
  PrimeElem from_digits(const Elem& digits, int) const { return {digits[0] % p, p}; }
  Elem lift(const PrimeElem& x, int) const { return Elem{x.value(), 0, 0, 0}; }
  PrimeElem zero() const { return {0, p}; }
  PrimeElem one() const { return {1, p}; }
};

using LevelCounts = std::vector<std::uint64_t>;

template <class FieldOps>
class LiftingCounter {
 public:
  using F = decltype(std::declval<FieldOps>().zero());

  LiftingCounter(const OracleProblem& problem, int levels, FieldOps ops, std::atomic<std::uint64_t>* nodes,
                 std::uint64_t budget)
      : n_(problem.rank()), levels_(levels), ring_(make_ring(problem, levels)), gram_(reduce_gram(problem, ring_)),
        ops_(ops), nodes_(nodes), budget_(budget) {
    unknowns_ = n_ * n_;
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t l = j; l < n_; ++l)
        if (j < l || ring_.p != 2) pairs_.push_back({j, l});
  }

  // Solutions modulo p, each satisfying the level-1 congruence.
  std::vector<std::vector<Elem>> level_one() const {
    const std::uint64_t q = ops_.size();
    const std::size_t slots = n_ * n_;
    long double total = 1;
    for (std::size_t i = 0; i < slots; ++i) total *= static_cast<long double>(q);
    if (total > static_cast<long double>(budget_)) throw BudgetExceeded("level-one enumeration exceeds the node budget");
    std::vector<std::vector<Elem>> out;
    std::vector<std::uint64_t> digit(slots, 0);
    std::vector<Elem> x(slots);
    while (true) {
      for (std::size_t s = 0; s < slots; ++s) x[s] = ops_.lift(ops_.element(digit[s]), ring_.f);
      if (satisfies(x, 1)) out.push_back(x);
      std::size_t s = 0;
      while (s < slots && ++digit[s] == q) digit[s++] = 0;
      if (s == slots) break;
    }
    return out;
  }

  // Visits the subtree below a level-k node, adding node counts per level.
  void expand(const std::vector<Elem>& x, int k, LevelCounts& counts) const {
    ++counts[k - 1];
    if (nodes_->fetch_add(1, std::memory_order_relaxed) >= budget_) throw BudgetExceeded("oracle node budget exhausted");
    if (k == levels_) return;
    std::vector<Vec<F>> kernel;
    Vec<F> particular;
    if (!children(x, k, kernel, particular)) return;
    if (k + 1 == levels_) {
      std::uint64_t c = 1;
      for (std::size_t i = 0; i < kernel.size(); ++i) c *= ops_.size();
      counts[k] += c;
      return;
    }
    for_each_child(x, k, kernel, particular, [&](const std::vector<Elem>& child) { expand(child, k + 1, counts); });
  }

  // Collects the nodes at level `depth`, counting the levels above it.
  void collect(const std::vector<Elem>& x, int k, int depth, LevelCounts& counts,
               std::vector<std::vector<Elem>>& frontier) const {
    if (k == depth) {
      frontier.push_back(x);
      return;
    }
    ++counts[k - 1];
    if (nodes_->fetch_add(1, std::memory_order_relaxed) >= budget_) throw BudgetExceeded("oracle node budget exhausted");
    std::vector<Vec<F>> kernel;
    Vec<F> particular;
    if (!children(x, k, kernel, particular)) return;
    for_each_child(x, k, kernel, particular,
                   [&](const std::vector<Elem>& child) { collect(child, k + 1, depth, counts, frontier); });
  }

 private:
  std::vector<Elem> gram_times(const std::vector<Elem>& x) const {
    std::vector<Elem> gx(n_ * n_);
    for (std::size_t r = 0; r < n_; ++r)
      for (std::size_t c = 0; c < n_; ++c) {
        Elem acc{};
        for (std::size_t t = 0; t < n_; ++t) acc = ring_.add(acc, ring_.mul(gram_[r * n_ + t], x[t * n_ + c]));
        gx[r * n_ + c] = acc;
      }
    return gx;
  }

  // XᵀGX − G.
  std::vector<Elem> defect(const std::vector<Elem>& x, const std::vector<Elem>& gx) const {
    std::vector<Elem> s(n_ * n_);
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t l = 0; l < n_; ++l) {
        Elem acc{};
        for (std::size_t t = 0; t < n_; ++t) acc = ring_.add(acc, ring_.mul(x[t * n_ + j], gx[t * n_ + l]));
        s[j * n_ + l] = ring_.sub(acc, gram_[j * n_ + l]);
      }
    return s;
  }

  bool satisfies(const std::vector<Elem>& x, int k) const {
    const auto s = defect(x, gram_times(x));
    for (const auto& e : s)
      if (ring_.valuation(e) < k) return false;
    return true;
  }

  // Affine system for the increment Y in X + p^k·Y; false when it has no solution.
  bool children(const std::vector<Elem>& x, int k, std::vector<Vec<F>>& kernel, Vec<F>& particular) const {
    const auto gx = gram_times(x);
    const auto s = defect(x, gx);
    const std::uint64_t pk = checked_pow(ring_.p, k);
    auto digit = [&](const Elem& e) {
      Elem d{};
      for (int i = 0; i < ring_.f; ++i) d[i] = (e[i] / pk) % ring_.p;
      return ops_.from_digits(d, ring_.f);
    };
    if (ring_.p == 2)
      for (std::size_t j = 0; j < n_; ++j)
        if (!digit(s[j * n_ + j]).is_zero()) return false;
    if (pairs_.empty()) {
      particular.assign(unknowns_, ops_.zero());
      for (std::size_t i = 0; i < unknowns_; ++i) {
        Vec<F> v(unknowns_, ops_.zero());
        v[i] = ops_.one();
        kernel.push_back(std::move(v));
      }
      return true;
    }
    Matrix<F> system(pairs_.size(), unknowns_, ops_.zero());
    Vec<F> rhs(pairs_.size(), ops_.zero());
    for (std::size_t e = 0; e < pairs_.size(); ++e) {
      const auto [j, l] = pairs_[e];
      for (std::size_t r = 0; r < n_; ++r) {
        const F mrj = ops_.from_digits(gx[r * n_ + j], ring_.f);
        const F mrl = ops_.from_digits(gx[r * n_ + l], ring_.f);
        system(e, r * n_ + l) = system(e, r * n_ + l) + mrj;
        system(e, r * n_ + j) = system(e, r * n_ + j) + mrl;
      }
      rhs[e] = ops_.zero() - digit(s[j * n_ + l]);
    }
    auto sol = linear_solve(system, rhs, ops_.zero(), ops_.one());
    if (!sol.particular) return false;
    kernel = std::move(sol.kernel);
    particular = std::move(*sol.particular);
    return true;
  }

  template <class Visit>
  void for_each_child(const std::vector<Elem>& x, int k, const std::vector<Vec<F>>& kernel, const Vec<F>& particular,
                      Visit&& visit) const {
    const std::uint64_t q = ops_.size();
    const std::uint64_t pk = checked_pow(ring_.p, k);
    std::vector<std::uint64_t> coeff(kernel.size(), 0);
    std::vector<Elem> child(n_ * n_);
    while (true) {
      Vec<F> y = particular;
      for (std::size_t b = 0; b < kernel.size(); ++b) {
        if (coeff[b] == 0) continue;
        const F c = ops_.element(coeff[b]);
        for (std::size_t i = 0; i < unknowns_; ++i) y[i] = y[i] + c * kernel[b][i];
      }
      for (std::size_t i = 0; i < unknowns_; ++i) {
        Elem step = ops_.lift(y[i], ring_.f);
        for (int t = 0; t < ring_.f; ++t) step[t] = ring_.mulmod(step[t], pk);
        child[i] = ring_.add(x[i], step);
      }
      visit(child);
      std::size_t b = 0;
      while (b < coeff.size() && ++coeff[b] == q) coeff[b++] = 0;
      if (b == coeff.size()) break;
    }
  }

  std::size_t n_;
  int levels_;
  TruncRing ring_;
  std::vector<Elem> gram_;
  FieldOps ops_;
  std::atomic<std::uint64_t>* nodes_;
  std::uint64_t budget_;
  std::size_t unknowns_ = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
};

template <class FieldOps>
LevelCounts run_counter(const OracleProblem& problem, int levels, const OracleOptions& options, FieldOps ops) {
  std::atomic<std::uint64_t> nodes{0};
  LiftingCounter<FieldOps> counter(problem, levels, ops, &nodes, options.node_budget);
  LevelCounts total(levels, 0);
  const auto roots = counter.level_one();
  const int depth = std::clamp(options.split_depth, 1, levels);
  std::vector<std::vector<Elem>> frontier;
  for (const auto& root : roots) counter.collect(root, 1, depth, total, frontier);

  const int jobs = std::max(1, options.jobs);
  std::vector<LevelCounts> partial(jobs, LevelCounts(levels, 0));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> failures(jobs);
  auto worker = [&](int id) {
    try {
      for (std::size_t i = next++; i < frontier.size(); i = next++) counter.expand(frontier[i], depth, partial[id]);
    } catch (...) {
      failures[id] = std::current_exception();
      next = frontier.size();
    }
  };
  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> threads;
    for (int id = 0; id < jobs; ++id) threads.emplace_back(worker, id);
    for (auto& t : threads) t.join();
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
  for (const auto& part : partial)
    for (int k = 0; k < levels; ++k) total[k] += part[k];
  return total;
}

Matrix<std::int64_t> mod_matrix(const Matrix<std::int64_t>& m, std::int64_t modulus) {
  Matrix<std::int64_t> out = m;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = ((m(r, c) % modulus) + modulus) % modulus;
  return out;
}

bool congruent_image(const Matrix<std::int64_t>& u1, const Matrix<std::int64_t>& u2, const Matrix<std::int64_t>& t,
                     std::int64_t modulus) {
  const std::size_t n = t.rows();
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t l = j; l < n; ++l) {
      std::int64_t acc = 0;
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) acc = (acc + t(r, j) * u1(r, c) % modulus * t(c, l)) % modulus;
      if (((acc - u2(j, l)) % modulus + modulus) % modulus != 0) return false;
    }
  return true;
}

std::int64_t det_mod2(const Matrix<std::int64_t>& t) {
  const std::size_t n = t.rows();
  std::vector<std::vector<int>> m(n, std::vector<int>(n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) m[r][c] = static_cast<int>(t(r, c) & 1);
  std::size_t rank = 0;
  for (std::size_t c = 0; c < n && rank < n; ++c) {
    std::size_t p = rank;
    while (p < n && !m[p][c]) ++p;
    if (p == n) continue;
    std::swap(m[p], m[rank]);
    for (std::size_t r = 0; r < n; ++r)
      if (r != rank && m[r][c])
        for (std::size_t k = 0; k < n; ++k) m[r][k] ^= m[rank][k];
    ++rank;
  }
  return rank == n ? 1 : 0;
}

}  // namespace

OracleProblem OracleProblem::from_integers(const Matrix<std::int64_t>& gram, std::uint64_t p) {
  OracleProblem problem;
  problem.p = p;
  problem.gram = Matrix<std::vector<std::int64_t>>(gram.rows(), gram.cols(), {});
  for (std::size_t r = 0; r < gram.rows(); ++r)
    for (std::size_t c = 0; c < gram.cols(); ++c) problem.gram(r, c) = {gram(r, c)};
  return problem;
}

void check_oracle_budget(const OracleProblem& problem, int levels) {
  validate(problem);
  const auto n = static_cast<int>(problem.rank());
  if (levels < 1) throw InvalidInput("oracle needs at least one level");
  if (levels > 8) throw BudgetExceeded("oracle supports at most 8 levels");
  if (problem.p == 2 && n * problem.degree > 4) throw BudgetExceeded("oracle supports n·f ≤ 4 at p = 2");
  if (problem.p != 2 && n > 3) throw BudgetExceeded("oracle supports n ≤ 3 at odd p");
  checked_pow(problem.p, levels);
}

std::vector<BigInt> count_levels(const OracleProblem& problem, int levels, const OracleOptions& options) {
  check_oracle_budget(problem, levels);
  LevelCounts counts;
  if (problem.p == 2) {
    const auto m = problem.modulus.empty() ? RingDescriptor::default_modulus(problem.degree) : problem.modulus;
    const ResidueField& field = RingDescriptor::get(problem.degree, RingDescriptor::kMinPrecision, m).residue_field();
    counts = run_counter(problem, levels, options, Char2Field{&field});
  } else {
    counts = run_counter(problem, levels, options, OddField{problem.p});
  }
  std::vector<BigInt> out;
  for (auto c : counts) out.push_back(BigInt(c));
  return out;
}

BigInt count_solutions(const OracleProblem& problem, int level, const OracleOptions& options) {
  return count_levels(problem, level, options).back();
}

int oracle_det_valuation(const OracleProblem& problem, int level) {
  validate(problem);
  const TruncRing ring = make_ring(problem, level);
  const auto g = reduce_gram(problem, ring);
  const std::size_t n = problem.rank();
  // Leibniz expansion over permutations; n is tiny here.
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  Elem det{};
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    Elem term{};
    term[0] = 1;
    for (std::size_t i = 0; i < n; ++i) term = ring.mul(term, g[i * n + perm[i]]);
    det = inversions % 2 ? ring.sub(det, term) : ring.add(det, term);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return ring.valuation(det);
}

StabilizationReport density_estimate(const OracleProblem& problem, int max_level, const OracleOptions& options) {
  StabilizationReport report;
  report.counts = count_levels(problem, max_level, options);
  const auto n = static_cast<long>(problem.rank());
  const BigInt q = ipow(BigInt(problem.p), static_cast<unsigned>(problem.degree));
  for (int k = 1; k <= max_level; ++k)
    report.ratios.push_back(Rational(report.counts[k - 1]) /
                            Rational(ipow(q, static_cast<unsigned>(k * n * (n - 1) / 2))));
  report.first_admissible_level = std::max(2 * oracle_det_valuation(problem, max_level) + 2, 3);
  for (int k = report.first_admissible_level; k + 2 <= max_level; ++k) {
    const Rational& c = report.ratios[k - 1];
    if (c == report.ratios[k] && c == report.ratios[k + 1]) {
      report.stabilized = true;
      report.stabilized_level = k;
      report.value = c;
      break;
    }
  }
  return report;
}

Rational stabilized_value(const StabilizationReport& report) {
  if (!report.stabilized)
    throw NotStabilized("ratios did not stabilize by level " + std::to_string(report.ratios.size()));
  return report.value;
}

IsometrySearch brute_isometry(const Matrix<std::int64_t>& u1, const Matrix<std::int64_t>& u2, int bits,
                              std::uint64_t node_budget) {
  const std::size_t n = u1.rows();
  if (!u1.square() || u2.rows() != n || !u2.square() || n == 0) throw InvalidInput("isometry search needs equal square blocks");
  if (n > 3 || bits < 1 || bits > 6) throw BudgetExceeded("isometry search supports rank ≤ 3 and at most 6 bits");
  IsometrySearch result;
  const std::size_t slots = n * n;
  // Depth-first over T mod 2^k, each level adding 2^k·Y for Y ∈ {0,1}^{n×n}.
  std::vector<Matrix<std::int64_t>> stack;
  std::vector<int> depth;
  stack.push_back(Matrix<std::int64_t>(n, n, 0));
  depth.push_back(0);
  while (!stack.empty()) {
    Matrix<std::int64_t> t = std::move(stack.back());
    const int k = depth.back();
    stack.pop_back();
    depth.pop_back();
    if (++result.nodes > node_budget) throw BudgetExceeded("isometry search node budget exhausted");
    result.deepest_level = std::max(result.deepest_level, k);
    if (k == bits) {
      result.transform = mod_matrix(t, std::int64_t{1} << bits);
      return result;
    }
    const std::int64_t step = std::int64_t{1} << k;
    const std::int64_t modulus = step * 2;
    for (std::uint64_t mask = (std::uint64_t{1} << slots); mask-- > 0;) {
      Matrix<std::int64_t> child = t;
      for (std::size_t s = 0; s < slots; ++s)
        if ((mask >> s) & 1u) child(s / n, s % n) += step;
      if (k == 0 && det_mod2(child) == 0) continue;
      if (!congruent_image(u1, u2, child, modulus)) continue;
      stack.push_back(std::move(child));
      depth.push_back(k + 1);
    }
  }
  return result;
}

}  // namespace latdens

#include "latdens/density.hpp"
#include "latdens/errors.hpp"
#include "latdens/field_linalg.hpp"
#include "latdens/invariant_chain.hpp"
#include "latdens/mass.hpp"
#include "latdens/odd_prime.hpp"
#include "latdens/oracle.hpp"
#include "test_support.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>

using namespace latdens;
using namespace latdens::testing;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

void expect(Outcome& o, bool cond, const std::string& what) {
  if (!cond && o.ok) {
    o.ok = false;
    o.detail = what;
  }
}

BigInt factorial(int n) {
  BigInt r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

Matrix<BigInt> big(const Matrix<std::int64_t>& m) {
  Matrix<BigInt> out(m.rows(), m.cols(), BigInt(0));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  return out;
}

// Parity sequence I I I II I I II I II I I at scales 0..10.
Outcome beta_rule() {
  Outcome o;
  const std::string seq = "I I I II I I II I II I I";
  ParityMap map;
  std::istringstream in(seq);
  std::string tok;
  for (int i = 0; in >> tok; ++i) map[i] = tok == "I" ? Parity::I : Parity::II;
  expect(o, beta_direct(map) == 4, "direct rule on the reference sequence");
  expect(o, beta_run_count(map) == 4, "run-count rule on the reference sequence");
  std::mt19937_64 rng(11);
  for (int t = 0; t < 1000; ++t) {
    ParityMap m;
    const int len = std::uniform_int_distribution<int>(1, 12)(rng);
    const int start = std::uniform_int_distribution<int>(-2, 3)(rng);
    for (int i = 0; i < len; ++i)
      if (rng() % 3 != 0) m[start + i] = rng() % 2 ? Parity::I : Parity::II;
    if (beta_direct(m) != beta_run_count(m)) {
      expect(o, false, "rules disagree on a random sequence");
      break;
    }
  }
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  const std::vector<Matrix<std::int64_t>> set = {
      {{1}}, {{3}}, {{1, 0}, {0, 1}}, {{0, 1}, {1, 0}}, {{2, 1}, {1, 2}}, {{1, 0}, {0, 2}}, {{1, 0}, {0, 4}},
      {{2, 0}, {0, 3}}};
  const RingDescriptor& ring = RingDescriptor::get(1, 24);
  OracleOptions opts;
  opts.jobs = 2;
  for (const auto& g : set) {
    const auto report = density_estimate(OracleProblem::from_integers(g, 2), 8, opts);
    const Rational beta = local_density(QuadLattice::from_integers(ring, g));
    expect(o, report.stabilized, "oracle did not stabilize");
    expect(o, report.stabilized && report.stabilized_level <= 6, "stabilization later than level 6");
    expect(o, report.stabilized && report.value == 2 * beta, "oracle value differs from 2·density at p = 2");
  }
  const Matrix<std::int64_t> i3 = identity_int(3);
  const auto report = density_estimate(OracleProblem::from_integers(i3, 3), 5, opts);
  Matrix<Rational> g(3, 3, Rational(0));
  for (int i = 0; i < 3; ++i) g(i, i) = 1;
  expect(o, report.stabilized && report.value == 2 * odd_prime_density(g, 3), "oracle differs from 2·density at p = 3");
  return o;
}

Outcome mass_regression() {
  Outcome o;
  for (int n = 2; n <= 8; ++n) {
    const Rational expected = Rational(1) / Rational((BigInt(1) << n) * factorial(n));
    expect(o, mass_via_local(big(identity_int(n))).mass == expected, "mass of I_" + std::to_string(n));
  }
  expect(o, mass_via_local(big(e8_gram())).mass == Rational(1, 696729600), "mass of E8");
  return o;
}

Outcome closed_form() {
  Outcome o;
  for (int n = 2; n <= 8; ++n)
    expect(o, sum_squares_mass_rational(n, NumberFieldData::rationals()) == mass_via_local(big(identity_int(n))).mass,
           "closed form at n = " + std::to_string(n));
  return o;
}

Outcome analytic_consistency() {
  Outcome o;
  for (int n = 2; n <= 12; ++n) {
    const double exact = static_cast<double>(sum_squares_mass_rational(n, NumberFieldData::rationals()));
    const double approx = sum_squares_mass_analytic(n, NumberFieldData::rationals());
    expect(o, std::abs(approx - exact) <= 1e-9 * std::abs(exact), "analytic path at n = " + std::to_string(n));
  }
  return o;
}

// Orders of SO over F_q for even q, written out directly.
BigInt so_odd(int m, const BigInt& q) {
  BigInt r = ipow(q, m * m);
  for (int i = 1; i <= m; ++i) r *= ipow(q, 2 * i) - 1;
  return r;
}
BigInt so_even(int m, const BigInt& q, bool split) {
  BigInt r = ipow(q, m * (m - 1)) * (split ? ipow(q, m) - 1 : ipow(q, m) + 1);
  for (int i = 1; i < m; ++i) r *= ipow(q, 2 * i) - 1;
  return r;
}

Outcome extension_display() {
  Outcome o;
  for (int f : {1, 2}) {
    const BigInt q = BigInt(1) << f;
    const bool odd_degree = f % 2 == 1;
    for (int n = 2; n <= 10; ++n) {
      const DensityReport rep = density_report(identity_lattice(n, f));
      const int r = n % 8;
      BigInt expected;
      if (r == 1 || r == 7) expected = 4 * ipow(q, n - 1) * so_even((n - 1) / 2, q, true);
      else if (r == 3 || r == 5) expected = 4 * ipow(q, n - 1) * so_even((n - 1) / 2, q, !odd_degree);
      else if (r == 2 || r == 6) expected = 4 * ipow(q, n - 1) * so_odd((n - 2) / 2, q);
      else if (r == 0) expected = 4 * ipow(q, 2 * n - 3) * so_even((n - 2) / 2, q, true);
      else expected = 4 * ipow(q, 2 * n - 3) * so_even((n - 2) / 2, q, !odd_degree);
      expect(o, rep.group.special_fiber_order == expected,
             "#G̃ of I_" + std::to_string(n) + " at q = " + q.str());
    }
  }
  return o;
}

struct Signature {
  std::vector<std::tuple<int, std::size_t, Parity>> jordan;
  std::vector<std::tuple<int, FineType, bool, std::size_t>> types;
  int alpha = 0;
  int beta = 0;
  Rational density;
  bool operator==(const Signature&) const = default;
};

Signature signature(const QuadLattice& l) {
  const DensityReport rep = density_report(l);
  Signature s;
  for (const auto& c : rep.symbol.constituents) s.jordan.emplace_back(c.scale, c.rank(), c.parity);
  for (const auto& t : rep.chain.constituents) s.types.emplace_back(t.scale, t.type, t.bound, t.vbar_dim);
  s.alpha = rep.chain.alpha;
  s.beta = rep.chain.beta;
  s.density = rep.density;
  return s;
}

bool contained(const std::vector<KVec>& sub, const std::vector<KVec>& big_space) {
  for (const auto& v : sub)
    if (!in_span(v, big_space, KappaElem::zero(v.front().field()))) return false;
  return true;
}

void check_chain(Outcome& o, const QuadLattice& l) {
  const DensityReport rep = density_report(l);
  expect(o, rep.group.dim_ru >= 0, "negative unipotent dimension");
  for (const auto& t : rep.chain.constituents)
    expect(o, t.vbar_dim == expected_vbar_dimension(t.parity, t.rank, t.bound, t.type), "dim V̄ off the table");
  for (const auto& sc : rep.chain.scales) {
    const ChainSpaces& s = sc.spaces;
    expect(o, sc.residue.nonsingular, "residue form singular");
    expect(o, s.ambient - s.b.size() <= 1, "dim A/B exceeds 1");
    expect(o, s.w.size() - s.x.size() <= 1 && s.x.size() <= s.w.size(), "dim W/X exceeds 1");
    expect(o, s.y.size() - s.z.size() <= 1 && s.z.size() <= s.y.size(), "dim Y/Z exceeds 1");
    expect(o, contained(s.x, s.w) && contained(s.z, s.y) && contained(s.y, s.b), "sandwich inclusion fails");
  }
}

struct SuiteResult {
  Outcome invariance;
  Outcome chain;
};

SuiteResult random_suite() {
  SuiteResult res;
  LatticeSampler sampler(20240601);
  for (int t = 0; t < 500; ++t) {
    const int f = sampler.uniform(1, 2);
    const RingDescriptor& ring = RingDescriptor::get(f, 40);
    const auto n = static_cast<std::size_t>(sampler.uniform(1, 6));
    const RingMatrix g = sampler.random_jordan_gram(ring, n, -1, 3);
    const QuadLattice base(ring, g);
    const QuadLattice moved = base.transformed(sampler.random_unimodular(ring, n));
    try {
      const Signature a = signature(base);
      const Signature b = signature(moved);
      expect(res.invariance, a == b, "invariants changed under a unimodular base change");
      const Rational q(BigInt(ring.residue_cardinality()));
      const long e = static_cast<long>(n * (n + 1) / 2);
      expect(res.invariance, signature(moved.scaled(1)).density == rpow(q, e) * b.density, "2-scaling shift");
      check_chain(res.chain, base);
      check_chain(res.chain, moved);
    } catch (const Error& err) {
      expect(res.invariance, false, std::string("error: ") + err.what());
      expect(res.chain, false, std::string("error: ") + err.what());
    }
  }
  return res;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const std::string& name, const std::function<Outcome()>& run) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.ok) ++failures;
    std::cout << (o.ok ? "PASS" : "FAIL") << " " << id << " " << name << " (" << secs << " s)"
              << (o.ok ? "" : " : " + o.detail) << std::endl;
    return secs;
  };
  report(1, "beta rule fidelity", beta_rule);
  report(2, "oracle equivalence", oracle_equivalence);
  report(3, "mass regression", mass_regression);
  report(4, "closed-form agreement", closed_form);
  report(5, "analytic/rational consistency", analytic_consistency);
  report(6, "unramified-extension group orders", extension_display);
  SuiteResult suite;
  const double suite_secs = report(7, "invariance suite", [&] {
    suite = random_suite();
    return suite.invariance;
  });
  std::cout << (suite.chain.ok ? "PASS" : "FAIL") << " 8 chain sanity (shared sampling, " << suite_secs << " s)"
            << (suite.chain.ok ? "" : " : " + suite.chain.detail) << std::endl;
  if (!suite.chain.ok) ++failures;
  return failures == 0 ? 0 : 1;
}

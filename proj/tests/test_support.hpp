#pragma once

#include "latdens/base_ring.hpp"
#include "latdens/lattice.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace latdens::testing {

inline RingMatrix int_gram(const RingDescriptor& ring, std::initializer_list<std::initializer_list<std::int64_t>> rows) {
  return ring_matrix(ring, Matrix<std::int64_t>(rows));
}

inline QuadLattice int_lattice(std::initializer_list<std::initializer_list<std::int64_t>> rows, int degree = 1,
                               int precision = 24) {
  const RingDescriptor& ring = RingDescriptor::get(degree, precision);
  return QuadLattice(ring, int_gram(ring, rows));
}

inline QuadLattice identity_lattice(std::size_t n, int degree = 1, int precision = 24) {
  const RingDescriptor& ring = RingDescriptor::get(degree, precision);
  return QuadLattice(ring, ring_identity(ring, n));
}

inline Matrix<std::int64_t> identity_int(std::size_t n) {
  Matrix<std::int64_t> m(n, n, 0);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

inline Matrix<std::int64_t> e8_gram() {
  return {{2, -1, 0, 0, 0, 0, 0, 0}, {-1, 2, -1, 0, 0, 0, 0, 0}, {0, -1, 2, -1, 0, 0, 0, -1},
          {0, 0, -1, 2, -1, 0, 0, 0}, {0, 0, 0, -1, 2, -1, 0, 0},  {0, 0, 0, 0, -1, 2, -1, 0},
          {0, 0, 0, 0, 0, -1, 2, 0},  {0, 0, -1, 0, 0, 0, 0, 2}};
}

class LatticeSampler {
 public:
  explicit LatticeSampler(std::uint64_t seed) : rng_(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  RingElem random_integer(const RingDescriptor& ring, int bound) {
    std::vector<Rational> c;
    for (int i = 0; i < ring.degree(); ++i) c.emplace_back(uniform(-bound, bound));
    return RingElem::from_coordinates(ring, c);
  }

  RingElem random_unit(const RingDescriptor& ring) {
    while (true) {
      RingElem u = random_integer(ring, 7);
      if (u.is_unit()) return u;
    }
  }

  RingElem random_even(const RingDescriptor& ring) { return random_integer(ring, 7).shifted(1); }

  // Block-diagonal Gram of random 2^s-modular blocks of rank 1 or 2 with s in [lo, hi].
  RingMatrix random_jordan_gram(const RingDescriptor& ring, std::size_t n, int lo, int hi) {
    RingMatrix g(n, n, RingElem::zero(ring));
    std::size_t k = 0;
    while (k < n) {
      const int s = uniform(lo, hi);
      if (k + 1 < n && uniform(0, 1) == 1) {
        const RingElem a = uniform(0, 1) ? random_unit(ring) : random_even(ring);
        const RingElem b = random_even(ring);
        g(k, k) = a.shifted(s);
        g(k + 1, k + 1) = b.shifted(s);
        g(k, k + 1) = g(k + 1, k) = RingElem::from_int(ring, 1).shifted(s);
        k += 2;
      } else {
        g(k, k) = random_unit(ring).shifted(s);
        k += 1;
      }
    }
    return g;
  }

  // Product of a permutation, unit diagonal and random unitriangular factors.
  RingMatrix random_unimodular(const RingDescriptor& ring, std::size_t n) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng_);
    RingMatrix p(n, n, RingElem::zero(ring));
    for (std::size_t i = 0; i < n; ++i) p(i, perm[i]) = random_unit(ring);
    RingMatrix upper = ring_identity(ring, n);
    RingMatrix lower = ring_identity(ring, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = r + 1; c < n; ++c) {
        upper(r, c) = random_integer(ring, 3);
        lower(c, r) = random_integer(ring, 3);
      }
    return ring_multiply(ring_multiply(p, upper), lower);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace latdens::testing

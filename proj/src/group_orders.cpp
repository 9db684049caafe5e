#include "latdens/group_orders.hpp"

#include "latdens/errors.hpp"

namespace latdens {

BigInt finite_orthogonal_order(OrthogonalClass kind, int m, const BigInt& q) {
  if (m < 0) throw InvalidInput("negative half-dimension");
  if (q < 2) throw InvalidInput("field size must be at least 2");
  const bool odd_char = q % 2 == 1;
  BigInt prod = 1;
  if (kind == OrthogonalClass::OddDimensional) {
    for (int i = 1; i <= m; ++i) prod *= ipow(q, 2 * i) - 1;
    const BigInt order = ipow(q, static_cast<unsigned>(m * m)) * prod;
    return odd_char ? 2 * order : order;
  }
  if (m == 0) return 1;
  for (int i = 1; i < m; ++i) prod *= ipow(q, 2 * i) - 1;
  const BigInt qm = ipow(q, m);
  const BigInt middle = kind == OrthogonalClass::Split ? qm - 1 : qm + 1;
  const BigInt order = ipow(q, static_cast<unsigned>(m * (m - 1))) * middle * prod;
  return odd_char ? 2 * order : order;
}

}  // namespace latdens

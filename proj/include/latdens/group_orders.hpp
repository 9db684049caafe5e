#pragma once

#include "latdens/kappa_forms.hpp"
#include "latdens/rational.hpp"

namespace latdens {

// Orders of finite orthogonal groups over F_q. For even q the connected groups SO(2m+1), SO(2m)
// and ²SO(2m); for odd q the full groups O(2m+1) and O^±(2m).
BigInt finite_orthogonal_order(OrthogonalClass kind, int m, const BigInt& q);

}  // namespace latdens

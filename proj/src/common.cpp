// SPDX-License-Identifier: Apache-2.0

#include "zotfs/common.hpp"

namespace zotfs {

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

UnitRoots::UnitRoots(std::int64_t order) : order_(order) {
  if (order < 1) throw ConfigError("UnitRoots: order must be positive");
  table_.resize(static_cast<std::size_t>(order));
  for (std::int64_t e = 0; e < order; ++e) {
    table_[static_cast<std::size_t>(e)] =
        std::polar(1.0, kTwoPi<double> * static_cast<double>(e) / static_cast<double>(order));
  }
}

}  // namespace zotfs

// SPDX-License-Identifier: Apache-2.0

#include "zotfs/region.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <set>

namespace zotfs {

ReadoffRegion::ReadoffRegion(int half_delay, int half_doppler) : half_delay_(half_delay), half_doppler_(half_doppler) {
  if (half_delay < 1 || half_doppler < 1) throw ConfigError("ReadoffRegion: half-diagonals must be >= 1");
  for (int k = -half_delay; k <= half_delay; ++k) {
    for (int l = -half_doppler; l <= half_doppler; ++l) {
      if (contains({k, l})) lags_.push_back({k, l});
    }
  }
}

bool ReadoffRegion::contains(Lag lag) const {
  // |k| / dk + |l| / dl <= 1  <=>  |k| dl + |l| dk <= dk dl, exact in integers.
  return static_cast<long>(std::abs(lag.k)) * half_doppler_ + static_cast<long>(std::abs(lag.l)) * half_delay_ <=
         static_cast<long>(half_delay_) * half_doppler_;
}

std::vector<Lag> LagBox::lags() const {
  std::vector<Lag> out;
  out.reserve(static_cast<std::size_t>(delay_extent()) * static_cast<std::size_t>(doppler_extent()));
  for (int k = k_min; k <= k_max; ++k) {
    for (int l = l_min; l <= l_max; ++l) out.push_back({k, l});
  }
  return out;
}

LagBox channel_support_box(const DDGrid& grid) {
  return {-2 * grid.M() + 1, 2 * grid.M() - 1, -2 * grid.N() + 1, 2 * grid.N() - 1};
}

std::vector<Lag> dilate(const std::vector<Lag>& region, int margin) {
  std::set<Lag> out;
  for (const Lag& p : region) {
    for (int dk = -margin; dk <= margin; ++dk) {
      for (int dl = -margin; dl <= margin; ++dl) out.insert({p.k + dk, p.l + dl});
    }
  }
  return {out.begin(), out.end()};
}

int chebyshev_distance(Lag lag, const std::vector<Lag>& region) {
  int best = std::numeric_limits<int>::max();
  for (const Lag& p : region) best = std::min(best, std::max(std::abs(lag.k - p.k), std::abs(lag.l - p.l)));
  return best;
}

}  // namespace zotfs

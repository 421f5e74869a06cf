// SPDX-License-Identifier: Apache-2.0
//
// Lag regions: the rhombic read-off region and the rectangular channel support.

#pragma once

#include <vector>

#include "zotfs/grid.hpp"
#include "zotfs/signals.hpp"

namespace zotfs {

/// Rhombus |k| / half_delay + |l| / half_doppler <= 1 (boundary inclusive).
class ReadoffRegion {
 public:
  ReadoffRegion(int half_delay = 8, int half_doppler = 10);

  int half_delay() const { return half_delay_; }
  int half_doppler() const { return half_doppler_; }
  bool contains(Lag lag) const;
  /// All member lags, ordered by (k, l).
  const std::vector<Lag>& lags() const { return lags_; }

 private:
  int half_delay_;
  int half_doppler_;
  std::vector<Lag> lags_;
};

/// Rectangle [k_min, k_max] x [l_min, l_max].
struct LagBox {
  int k_min;
  int k_max;
  int l_min;
  int l_max;

  bool contains(Lag lag) const { return lag.k >= k_min && lag.k <= k_max && lag.l >= l_min && lag.l <= l_max; }
  int delay_extent() const { return k_max - k_min + 1; }
  int doppler_extent() const { return l_max - l_min + 1; }
  std::vector<Lag> lags() const;
};

/// Support of the true effective channel used for NMSE: k in [-2M+1, 2M-1], l in [-2N+1, 2N-1].
LagBox channel_support_box(const DDGrid& grid);

/// Lags within Chebyshev distance `margin` of any lag in `region`.
std::vector<Lag> dilate(const std::vector<Lag>& region, int margin);

/// Chebyshev distance from a lag to the nearest member of `region`.
int chebyshev_distance(Lag lag, const std::vector<Lag>& region);

}  // namespace zotfs

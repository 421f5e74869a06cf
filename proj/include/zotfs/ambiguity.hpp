// SPDX-License-Identifier: Apache-2.0
//
// Discrete cross-ambiguity
//   A_{a,b}[k, l] = sum_{k'=0}^{M-1} sum_{l'=0}^{N-1} a[k', l'] conj(b[k' - k, l' - l]) exp(-j 2 pi l (k' - k) / MN)
// with b evaluated through its quasi-periodic extension. Lags are evaluated
// directly, without wrapping.

#pragma once

#include <span>
#include <vector>

#include "zotfs/region.hpp"
#include "zotfs/signals.hpp"

namespace zotfs {

class AmbiguitySurface {
 public:
  AmbiguitySurface(const DDGrid& grid, LagBox lags, CMatrix values);

  const DDGrid& grid() const { return grid_; }
  const LagBox& lags() const { return lags_; }
  const CMatrix& values() const { return values_; }
  Complex at(Lag lag) const { return values_(lag.k - lags_.k_min, lag.l - lags_.l_min); }

 private:
  DDGrid grid_;
  LagBox lags_;
  CMatrix values_;
};

AmbiguitySurface cross_ambiguity(const QuasiPeriodicSignal& a, const QuasiPeriodicSignal& b, const LagBox& lags);

/// Cross-ambiguity at an arbitrary list of lags.
std::vector<Complex> cross_ambiguity(const QuasiPeriodicSignal& a, const QuasiPeriodicSignal& b,
                                     std::span<const Lag> lags);

Complex cross_ambiguity_at(const QuasiPeriodicSignal& a, const QuasiPeriodicSignal& b, Lag lag);

}  // namespace zotfs

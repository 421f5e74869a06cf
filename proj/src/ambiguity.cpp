// SPDX-License-Identifier: Apache-2.0

#include "zotfs/ambiguity.hpp"

namespace zotfs {

namespace {

Complex ambiguity_at(const CMatrix& a, const CMatrix& b, int M, int N, const UnitRoots& w, Lag lag) {
  Complex acc{};
  for (int kp = 0; kp < M; ++kp) {
    const std::int64_t src = static_cast<std::int64_t>(kp) - lag.k;
    const std::int64_t n = floor_div(src, M);
    const auto k0 = static_cast<Eigen::Index>(src - n * M);
    const std::int64_t phase_base = static_cast<std::int64_t>(lag.l) * src;
    const std::int64_t step = n * M;
    for (int lp = 0; lp < N; ++lp) {
      const std::int64_t l0 = pos_mod(static_cast<std::int64_t>(lp) - lag.l, N);
      // conj(b[k0, l0] exp(j 2 pi n l0 / N)) exp(-j 2 pi l (k' - k) / MN)
      acc += a(kp, lp) * std::conj(b(k0, l0)) * w(-(step * l0 + phase_base));
    }
  }
  return acc;
}

}  // namespace

AmbiguitySurface::AmbiguitySurface(const DDGrid& grid, LagBox lags, CMatrix values)
    : grid_(grid), lags_(lags), values_(std::move(values)) {
  if (values_.rows() != lags_.delay_extent() || values_.cols() != lags_.doppler_extent()) {
    throw DomainError("AmbiguitySurface: value array does not match the lag range");
  }
}

AmbiguitySurface cross_ambiguity(const QuasiPeriodicSignal& a, const QuasiPeriodicSignal& b, const LagBox& lags) {
  const DDGrid& g = a.grid();
  require_same_grid(g, b.grid(), "cross_ambiguity");
  if (lags.k_max < lags.k_min || lags.l_max < lags.l_min) throw DomainError("cross_ambiguity: empty lag range");
  const UnitRoots w(g.size());
  CMatrix v(lags.delay_extent(), lags.doppler_extent());
  for (int k = lags.k_min; k <= lags.k_max; ++k) {
    for (int l = lags.l_min; l <= lags.l_max; ++l) {
      v(k - lags.k_min, l - lags.l_min) = ambiguity_at(a.fundamental(), b.fundamental(), g.M(), g.N(), w, {k, l});
    }
  }
  return {g, lags, std::move(v)};
}

std::vector<Complex> cross_ambiguity(const QuasiPeriodicSignal& a, const QuasiPeriodicSignal& b,
                                     std::span<const Lag> lags) {
  const DDGrid& g = a.grid();
  require_same_grid(g, b.grid(), "cross_ambiguity");
  const UnitRoots w(g.size());
  std::vector<Complex> out;
  out.reserve(lags.size());
  for (const Lag& lag : lags) out.push_back(ambiguity_at(a.fundamental(), b.fundamental(), g.M(), g.N(), w, lag));
  return out;
}

Complex cross_ambiguity_at(const QuasiPeriodicSignal& a, const QuasiPeriodicSignal& b, Lag lag) {
  require_same_grid(a.grid(), b.grid(), "cross_ambiguity");
  const UnitRoots w(a.grid().size());
  return ambiguity_at(a.fundamental(), b.fundamental(), a.grid().M(), a.grid().N(), w, lag);
}

}  // namespace zotfs

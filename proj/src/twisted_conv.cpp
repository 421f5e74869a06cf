// SPDX-License-Identifier: Apache-2.0

#include "zotfs/twisted_conv.hpp"

#include <vector>

namespace zotfs {

QuasiPeriodicSignal twisted_conv(const DDTaps& a, const QuasiPeriodicSignal& b) {
  const DDGrid& g = b.grid();
  require_same_grid(a.grid(), g, "twisted_conv");
  const int M = g.M();
  const int N = g.N();
  const UnitRoots w(g.size());
  const CMatrix& x = b.fundamental();
  CMatrix out = CMatrix::Zero(M, N);
  std::vector<int> src_l(static_cast<std::size_t>(N));

  for (const Tap& tap : a.taps()) {
    const int dk = tap.lag.k;
    const int dl = tap.lag.l;
    for (int l = 0; l < N; ++l) src_l[static_cast<std::size_t>(l)] = static_cast<int>(pos_mod(l - dl, N));
    for (int k = 0; k < M; ++k) {
      const std::int64_t src = static_cast<std::int64_t>(k) - dk;
      const std::int64_t n = floor_div(src, M);
      const auto k0 = static_cast<Eigen::Index>(src - n * M);
      // out[k, l] += h[dk, dl] x[k - dk, l - dl] exp(j 2 pi (k - dk) dl / MN)
      const std::int64_t base = src * dl;
      const std::int64_t step = n * M;
      for (int l = 0; l < N; ++l) {
        const int l0 = src_l[static_cast<std::size_t>(l)];
        out(k, l) += tap.value * x(k0, l0) * w(base + step * l0);
      }
    }
  }
  return {g, std::move(out)};
}

QuasiPeriodicSignal twisted_conv(const QuasiPeriodicSignal& a, const DDTaps& b) {
  const DDGrid& g = a.grid();
  require_same_grid(b.grid(), g, "twisted_conv");
  const int M = g.M();
  const int N = g.N();
  const UnitRoots w(g.size());
  const CMatrix& x = a.fundamental();
  CMatrix out = CMatrix::Zero(M, N);

  for (const Tap& tap : b.taps()) {
    const int kp = tap.lag.k;
    const int lp = tap.lag.l;
    for (int k = 0; k < M; ++k) {
      const std::int64_t src = static_cast<std::int64_t>(k) - kp;
      const std::int64_t n = floor_div(src, M);
      const auto k0 = static_cast<Eigen::Index>(src - n * M);
      for (int l = 0; l < N; ++l) {
        const std::int64_t srcl = static_cast<std::int64_t>(l) - lp;
        const std::int64_t l0 = pos_mod(srcl, N);
        // a[k - k', l - l'] b[k', l'] exp(j 2 pi k' (l - l') / MN)
        out(k, l) += x(k0, l0) * tap.value * w(n * M * l0 + static_cast<std::int64_t>(kp) * srcl);
      }
    }
  }
  return {g, std::move(out)};
}

DDTaps twisted_conv(const DDTaps& a, const DDTaps& b) {
  require_same_grid(a.grid(), b.grid(), "twisted_conv");
  const UnitRoots w(a.grid().size());
  std::vector<Tap> out;
  out.reserve(a.size() * b.size());
  for (const Tap& ta : a.taps()) {
    for (const Tap& tb : b.taps()) {
      // k' = tb.k, l - l' = ta.l
      const Lag lag{ta.lag.k + tb.lag.k, ta.lag.l + tb.lag.l};
      out.push_back({lag, ta.value * tb.value * w(static_cast<std::int64_t>(tb.lag.k) * ta.lag.l)});
    }
  }
  return {a.grid(), std::move(out)};
}

QuasiPeriodicSignal twisted_conv(const QuasiPeriodicSignal& a, const QuasiPeriodicSignal& b,
                                 std::optional<std::span<const Lag>> lag_support) {
  if (!lag_support || lag_support->empty()) {
    throw ConfigError("twisted_conv: quasi-periodic operands have unbounded support; supply a finite lag support");
  }
  require_same_grid(a.grid(), b.grid(), "twisted_conv");
  std::vector<Tap> taps;
  taps.reserve(lag_support->size());
  for (const Lag& lag : *lag_support) taps.push_back({lag, b.at(lag.k, lag.l)});
  return twisted_conv(a, DDTaps(b.grid(), std::move(taps)));
}

PeriodicDDSignal twisted_conv_periodic(const PeriodicDDSignal& a, const PeriodicDDSignal& b) {
  if (a.period() != b.period()) throw DomainError("twisted_conv_periodic: period mismatch");
  const std::int64_t P = a.period();
  const UnitRoots w(P);
  const CMatrix& A = a.samples();
  const CMatrix& B = b.samples();
  CMatrix out = CMatrix::Zero(P, P);
  for (std::int64_t k = 0; k < P; ++k) {
    for (std::int64_t kp = 0; kp < P; ++kp) {
      const std::int64_t dk = pos_mod(k - kp, P);
      for (std::int64_t lp = 0; lp < P; ++lp) {
        const Complex coeff = A(kp, lp) * w(lp * dk);
        if (coeff == Complex{}) continue;
        for (std::int64_t l = 0; l < P; ++l) out(k, l) += coeff * B(dk, pos_mod(l - lp, P));
      }
    }
  }
  return {P, std::move(out)};
}

}  // namespace zotfs

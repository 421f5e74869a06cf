// SPDX-License-Identifier: Apache-2.0
//
// Discrete twisted convolutions:
//   (a *sd b)[k, l] = sum_{k', l'} a[k - k', l - l'] b[k', l'] exp(j 2 pi k' (l - l') / MN)
// and the MN-periodic variant
//   (a (*) b)[k, l] = sum_{k', l' = 0}^{MN - 1} a[k', l'] b[k - k', l - l'] exp(j 2 pi l' (k - k') / MN).

#pragma once

#include <optional>
#include <span>

#include "zotfs/signals.hpp"

namespace zotfs {

/// Taps on the left, quasi-periodic signal on the right (the channel action h *sd x).
QuasiPeriodicSignal twisted_conv(const DDTaps& a, const QuasiPeriodicSignal& b);

/// Quasi-periodic signal on the left, finitely supported taps on the right. The
/// returned samples are exact on the fundamental domain, but the sum itself is
/// quasi-periodic only when every lag of `b` lies on the period lattice (k' = 0
/// mod M, l' = 0 mod N); do not rely on at() outside the fundamental domain otherwise.
QuasiPeriodicSignal twisted_conv(const QuasiPeriodicSignal& a, const DDTaps& b);

/// Two finitely supported functions; the result is finitely supported.
DDTaps twisted_conv(const DDTaps& a, const DDTaps& b);

/// Two quasi-periodic signals. The sum over Z^2 is infinite, so the caller must
/// bound the lags (k', l') taken from `b`; throws ConfigError when `lag_support`
/// is absent or empty. Same fundamental-domain caveat as the overload above.
QuasiPeriodicSignal twisted_conv(const QuasiPeriodicSignal& a, const QuasiPeriodicSignal& b,
                                 std::optional<std::span<const Lag>> lag_support);

/// MN-periodic twisted convolution. Throws DomainError on period mismatch.
PeriodicDDSignal twisted_conv_periodic(const PeriodicDDSignal& a, const PeriodicDDSignal& b);

}  // namespace zotfs

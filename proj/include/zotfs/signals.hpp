// SPDX-License-Identifier: Apache-2.0
//
// Discrete delay-Doppler signal containers.

#pragma once

#include <compare>
#include <span>
#include <vector>

#include "zotfs/common.hpp"
#include "zotfs/grid.hpp"

namespace zotfs {

/// Integer delay-Doppler offset (k along delay, l along Doppler).
struct Lag {
  int k = 0;
  int l = 0;
  auto operator<=>(const Lag&) const = default;
};

struct Tap {
  Lag lag;
  Complex value;
};

/// Quasi-periodic discrete DD signal stored by its fundamental-domain samples
/// fund(k, l), k in [0, M), l in [0, N). Samples outside the fundamental domain
/// follow x[k + nM, l + mN] = x[k, l] exp(j 2 pi n l / N) and are computed on demand.
class QuasiPeriodicSignal {
 public:
  QuasiPeriodicSignal(const DDGrid& grid, CMatrix fundamental);
  static QuasiPeriodicSignal zeros(const DDGrid& grid);
  /// Single quasi-periodic impulse of the given weight at fundamental index (k, l).
  static QuasiPeriodicSignal impulse(const DDGrid& grid, int k, int l, Complex weight = 1.0);

  const DDGrid& grid() const { return grid_; }
  const CMatrix& fundamental() const { return fund_; }

  /// Fundamental-domain sample, no range check.
  Complex operator()(int k, int l) const { return fund_(k, l); }
  /// Sample at an arbitrary integer position via the quasi-periodic extension.
  Complex at(std::int64_t k, std::int64_t l) const;

  double energy() const { return fund_.squaredNorm(); }

  QuasiPeriodicSignal operator+(const QuasiPeriodicSignal& rhs) const;
  QuasiPeriodicSignal operator-(const QuasiPeriodicSignal& rhs) const;
  QuasiPeriodicSignal operator*(Complex scale) const;

 private:
  DDGrid grid_;
  CMatrix fund_;
};

/// Finitely supported DD function on Z^2 (channel taps, impulses). Taps are kept
/// sorted by lag; lags not present are zero.
class DDTaps {
 public:
  explicit DDTaps(const DDGrid& grid) : grid_(grid) {}
  DDTaps(const DDGrid& grid, std::vector<Tap> taps);
  /// Taps with the given support and values (same length).
  DDTaps(const DDGrid& grid, std::span<const Lag> support, std::span<const Complex> values);
  static DDTaps impulse(const DDGrid& grid, Lag at, Complex weight = 1.0);

  const DDGrid& grid() const { return grid_; }
  std::span<const Tap> taps() const { return taps_; }
  std::size_t size() const { return taps_.size(); }
  bool empty() const { return taps_.empty(); }

  /// Value at a lag, zero when outside the support.
  Complex value(Lag lag) const;
  std::vector<Lag> support() const;
  double energy() const;

  DDTaps operator+(const DDTaps& rhs) const;
  DDTaps operator-(const DDTaps& rhs) const;
  DDTaps operator*(Complex scale) const;

 private:
  DDGrid grid_;
  std::vector<Tap> taps_;
};

/// MN-periodic DD function, one period stored as an MN x MN matrix.
class PeriodicDDSignal {
 public:
  PeriodicDDSignal(std::int64_t period, CMatrix samples);
  /// The chirp filter w[k, l] = exp(j 2 pi q (k^2 + l^2) / MN) / MN.
  static PeriodicDDSignal chirp(const DDGrid& grid, std::int64_t slope);
  /// One MN x MN period of a quasi-periodic signal (quasi-periodic signals are MN-periodic).
  static PeriodicDDSignal from_quasi_periodic(const QuasiPeriodicSignal& x);

  std::int64_t period() const { return period_; }
  const CMatrix& samples() const { return samples_; }
  Complex at(std::int64_t k, std::int64_t l) const {
    return samples_(pos_mod(k, period_), pos_mod(l, period_));
  }
  double period_energy() const { return samples_.squaredNorm(); }
  /// Restriction to the M x N fundamental domain.
  QuasiPeriodicSignal fundamental(const DDGrid& grid) const;

 private:
  std::int64_t period_;
  CMatrix samples_;
};

/// Data signal from an M x N symbol array: fund = symbols / sqrt(MN).
QuasiPeriodicSignal place_data_symbols(const CMatrix& symbols, const DDGrid& grid);

/// Vector index k N + l (zero-based).
inline std::int64_t vector_index(const DDGrid& grid, int k, int l) { return static_cast<std::int64_t>(k) * grid.N() + l; }
CVector vectorize(const QuasiPeriodicSignal& x);
QuasiPeriodicSignal devectorize(const CVector& v, const DDGrid& grid);

}  // namespace zotfs

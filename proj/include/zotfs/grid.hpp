// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "zotfs/common.hpp"

namespace zotfs {

/// Delay-Doppler information grid: M delay bins over one delay period, N Doppler
/// bins over one Doppler period, with tau_p * nu_p = 1.
class DDGrid {
 public:
  /// Grid with tau_p = 1 / nu_p.
  DDGrid(int M, int N, double doppler_period_hz);
  /// Throws ConfigError unless tau_p * nu_p = 1 to 1e-12 relative.
  DDGrid(int M, int N, double delay_period_s, double doppler_period_hz);

  int M() const { return M_; }
  int N() const { return N_; }
  std::int64_t size() const { return static_cast<std::int64_t>(M_) * N_; }

  double delay_period() const { return tau_p_; }
  double doppler_period() const { return nu_p_; }
  double bandwidth() const { return M_ * nu_p_; }     // B = M nu_p
  double duration() const { return N_ * tau_p_; }     // T = N tau_p
  double delay_resolution() const { return tau_p_ / M_; }
  double doppler_resolution() const { return nu_p_ / N_; }

  bool operator==(const DDGrid& other) const = default;

 private:
  int M_;
  int N_;
  double tau_p_;
  double nu_p_;
};

void require_same_grid(const DDGrid& a, const DDGrid& b, const char* what);

}  // namespace zotfs

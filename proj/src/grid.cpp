// SPDX-License-Identifier: Apache-2.0

#include "zotfs/grid.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace zotfs {

namespace {

void check_dims(int M, int N) {
  if (M < 1 || N < 1) throw ConfigError("DDGrid: M and N must be >= 1");
  // Modular arithmetic on MN runs in 64-bit with 128-bit products.
  if (static_cast<std::int64_t>(M) * N > (std::int64_t{1} << 31)) throw ConfigError("DDGrid: MN exceeds 2^31");
}

}  // namespace

DDGrid::DDGrid(int M, int N, double doppler_period_hz) : DDGrid(M, N, 1.0 / doppler_period_hz, doppler_period_hz) {}

DDGrid::DDGrid(int M, int N, double delay_period_s, double doppler_period_hz)
    : M_(M), N_(N), tau_p_(delay_period_s), nu_p_(doppler_period_hz) {
  check_dims(M, N);
  if (!(tau_p_ > 0.0) || !(nu_p_ > 0.0) || !std::isfinite(tau_p_) || !std::isfinite(nu_p_)) {
    throw ConfigError("DDGrid: periods must be positive and finite");
  }
  if (std::abs(tau_p_ * nu_p_ - 1.0) > 1e-12) {
    throw ConfigError("DDGrid: delay period times Doppler period must equal 1, got " +
                      std::to_string(tau_p_ * nu_p_));
  }
}

void require_same_grid(const DDGrid& a, const DDGrid& b, const char* what) {
  if (!(a == b)) throw DomainError(std::string(what) + ": grid mismatch");
}

}  // namespace zotfs

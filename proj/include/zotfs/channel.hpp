// SPDX-License-Identifier: Apache-2.0
//
// Physical delay-Doppler channels.

#pragma once

#include <random>
#include <vector>

#include "zotfs/common.hpp"

namespace zotfs {

struct Path {
  Complex gain;
  double delay_s;
  double doppler_hz;
};

struct ChannelRealization {
  std::vector<Path> paths;

  double power() const;
};

/// Power-delay profile with Doppler nu_max cos(theta), theta ~ U[0, 2 pi).
struct VehAProfile {
  std::vector<double> delays_us{0.0, 0.31, 0.71, 1.09, 1.73, 2.51};
  std::vector<double> powers_db{0.0, -1.0, -9.0, -10.0, -15.0, -20.0};
  double nu_max_hz = 815.0;

  std::size_t paths() const { return delays_us.size(); }
  double max_delay_s() const;
  /// Linear path powers normalized to unit sum.
  std::vector<double> normalized_powers() const;
  void validate() const;
};

using Rng = std::mt19937_64;

/// One realization: fixed profile delays, Doppler nu_max cos(theta_p), and
/// circularly-symmetric complex Gaussian gains with variance equal to the
/// normalized path power.
ChannelRealization sample_veh_a(const VehAProfile& profile, Rng& rng);

/// Independent realizations for every (rx, tx) pair, stored row-major at [i * n_t + j].
std::vector<ChannelRealization> sample_veh_a_mimo(const VehAProfile& profile, int n_r, int n_t, Rng& rng);

/// Deterministic channel from explicit paths, for tests and fixtures.
ChannelRealization make_test_channel(std::vector<Path> paths);

}  // namespace zotfs

// SPDX-License-Identifier: Apache-2.0
//
// Chirp-spread pilots and the lattices carrying their self- and cross-ambiguity.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "zotfs/region.hpp"
#include "zotfs/signals.hpp"

namespace zotfs {

/// Point pilot at (k_p, l_p) spread by the chirp of slope q.
struct SpreadPilotConfig {
  int k_p = 0;
  int l_p = 0;
  std::int64_t q = 1;

  bool operator==(const SpreadPilotConfig&) const = default;
};

/// Inverse of a modulo `modulus` in [0, modulus). Throws DomainError when gcd(a, modulus) != 1.
std::int64_t mod_inverse(std::int64_t a, std::int64_t modulus);

/// theta = ((2q)^{-1} - 2q) mod MN.
std::int64_t lattice_theta(std::int64_t q, const DDGrid& grid);

/// Throws DomainError unless M, N are odd primes and q is coprime to both.
void require_lattice_conditions(const SpreadPilotConfig& cfg, const DDGrid& grid);

/// x_s[k, l] = sum_{n<N, m<M} w[k - k_p - nM, l - l_p - mN] exp(j 2 pi n l_p / N)
///             exp(j 2 pi (l - l_p - mN)(k_p + nM) / MN), evaluated directly.
/// Throws ConfigError when (k_p, l_p) lies outside the fundamental domain.
QuasiPeriodicSignal build_spread_pilot(const SpreadPilotConfig& cfg, const DDGrid& grid);

/// Lattice point reduced to [0, MN)^2. `theta` is the phase of the self-ambiguity
/// there (zero for cross-ambiguity points).
struct LatticePoint {
  std::int64_t k = 0;
  std::int64_t l = 0;
  double theta = 0.0;

  bool operator==(const LatticePoint& o) const { return k == o.k && l == o.l; }
  bool operator<(const LatticePoint& o) const { return k != o.k ? k < o.k : l < o.l; }
};

/// The MN points of the twisted lattice (4q^2)^{-1} U [nM; mN], U = [theta 1; 1 2q],
/// sorted by (k, l). Phases are measured from the pilot's own ambiguity.
std::vector<LatticePoint> predict_self_support(const SpreadPilotConfig& cfg, const DDGrid& grid);

/// Support of A_{x_s,v, x_s,j} reduced to [0, MN)^2, sorted. Computed from the
/// two congruences mod M and mod N and from the shifted-lattice closed form;
/// throws NumericalError if the two disagree. Throws DomainError when
/// q_j != q_v (mod MN) or the lattice conditions fail.
std::vector<LatticePoint> predict_cross_support(const SpreadPilotConfig& cfg_j, const SpreadPilotConfig& cfg_v,
                                                const DDGrid& grid);

struct PilotPairReport {
  std::size_t v = 0;  // interfering pilot
  std::size_t j = 0;  // reference pilot
  int min_distance = 0;
  Lag nearest;
  bool pass = false;
};

struct PilotSetReport {
  bool pass = true;
  int margin = 0;
  std::vector<PilotPairReport> pairs;
  std::vector<std::string> warnings;
};

/// For every ordered pair v != j, the Chebyshev distance from the nearest point
/// of the cross lattice (lifted to its representative closest to the origin) to
/// the read-off region. A pair fails when that distance is <= margin.
PilotSetReport validate_pilot_set(std::span<const SpreadPilotConfig> cfgs, const DDGrid& grid,
                                  const ReadoffRegion& region, int margin = 4);

}  // namespace zotfs

// SPDX-License-Identifier: Apache-2.0

#include "zotfs/pilot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>
#include <utility>

#include "zotfs/ambiguity.hpp"

namespace zotfs {

std::int64_t mod_inverse(std::int64_t a, std::int64_t modulus) {
  if (modulus < 1) throw DomainError("mod_inverse: modulus must be positive");
  std::int64_t r0 = modulus, r1 = pos_mod(a, modulus);
  std::int64_t s0 = 0, s1 = 1;
  while (r1 != 0) {
    const std::int64_t t = r0 / r1;
    std::tie(r0, r1) = std::pair{r1, r0 - t * r1};
    std::tie(s0, s1) = std::pair{s1, s0 - t * s1};
  }
  if (r0 != 1) {
    throw DomainError("mod_inverse: " + std::to_string(a) + " is not invertible modulo " + std::to_string(modulus));
  }
  return pos_mod(s0, modulus);
}

std::int64_t lattice_theta(std::int64_t q, const DDGrid& grid) {
  const std::int64_t mn = grid.size();
  return pos_mod(mod_inverse(2 * q, mn) - 2 * q, mn);
}

void require_lattice_conditions(const SpreadPilotConfig& cfg, const DDGrid& grid) {
  const int M = grid.M();
  const int N = grid.N();
  if (M == 2 || N == 2 || !is_prime(M) || !is_prime(N)) {
    throw DomainError("pilot lattice: M and N must be odd primes (got " + std::to_string(M) + ", " +
                      std::to_string(N) + ")");
  }
  if (gcd64(cfg.q, M) != 1 || gcd64(cfg.q, N) != 1) {
    throw DomainError("pilot lattice: slope q = " + std::to_string(cfg.q) + " must be coprime to M and N");
  }
}

QuasiPeriodicSignal build_spread_pilot(const SpreadPilotConfig& cfg, const DDGrid& grid) {
  const int M = grid.M();
  const int N = grid.N();
  if (cfg.k_p < 0 || cfg.k_p >= M || cfg.l_p < 0 || cfg.l_p >= N) {
    throw ConfigError("build_spread_pilot: pilot location outside the fundamental domain");
  }
  const std::int64_t mn = grid.size();
  const UnitRoots w(mn);
  const std::int64_t q = pos_mod(cfg.q, mn);
  CMatrix fund(M, N);
  for (int k = 0; k < M; ++k) {
    for (int l = 0; l < N; ++l) {
      Complex acc{};
      for (std::int64_t n = 0; n < N; ++n) {
        const std::int64_t a = k - cfg.k_p - n * M;
        const std::int64_t kk = cfg.k_p + n * M;
        for (std::int64_t m = 0; m < M; ++m) {
          const std::int64_t b = l - cfg.l_p - m * N;
          std::int64_t e = mul_mod(q, pos_mod(a * a + b * b, mn), mn);
          e += mul_mod(n * cfg.l_p, M, mn);
          e += mul_mod(b, kk, mn);
          acc += w(e);
        }
      }
      fund(k, l) = acc / static_cast<double>(mn);
    }
  }
  return {grid, std::move(fund)};
}

std::vector<LatticePoint> predict_self_support(const SpreadPilotConfig& cfg, const DDGrid& grid) {
  require_lattice_conditions(cfg, grid);
  const std::int64_t mn = grid.size();
  const std::int64_t q = pos_mod(cfg.q, mn);
  const std::int64_t theta = lattice_theta(q, grid);
  const std::int64_t inv = mod_inverse(mul_mod(4 * q, q, mn), mn);
  const QuasiPeriodicSignal x = build_spread_pilot(cfg, grid);

  std::vector<LatticePoint> pts;
  pts.reserve(static_cast<std::size_t>(mn));
  for (std::int64_t n = 0; n < grid.N(); ++n) {
    for (std::int64_t m = 0; m < grid.M(); ++m) {
      const std::int64_t a = n * grid.M();
      const std::int64_t b = m * grid.N();
      LatticePoint p;
      p.k = mul_mod(inv, mul_mod(theta, a, mn) + b, mn);
      p.l = mul_mod(inv, a + mul_mod(2 * q, b, mn), mn);
      p.theta = std::arg(cross_ambiguity_at(x, x, Lag{static_cast<int>(p.k), static_cast<int>(p.l)}));
      pts.push_back(p);
    }
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

std::vector<LatticePoint> predict_cross_support(const SpreadPilotConfig& cfg_j, const SpreadPilotConfig& cfg_v,
                                                const DDGrid& grid) {
  require_lattice_conditions(cfg_j, grid);
  require_lattice_conditions(cfg_v, grid);
  const std::int64_t mn = grid.size();
  if (pos_mod(cfg_j.q - cfg_v.q, mn) != 0) {
    throw DomainError("predict_cross_support: slopes differ modulo MN; the shifted-lattice form does not apply");
  }
  const std::int64_t M = grid.M();
  const std::int64_t N = grid.N();
  const std::int64_t q = pos_mod(cfg_j.q, mn);
  const std::int64_t theta = lattice_theta(q, grid);
  const std::int64_t dk = cfg_j.k_p - cfg_v.k_p;
  const std::int64_t dl = cfg_j.l_p - cfg_v.l_p;

  // Congruences mod M and mod N.
  std::vector<LatticePoint> by_congruence;
  for (std::int64_t k = 0; k < mn; ++k) {
    // l is fixed mod M by the first congruence
    const std::int64_t l0 = pos_mod(2 * q % M * pos_mod(k + dk, M), M);
    for (std::int64_t l = l0; l < mn; l += M) {
      if (pos_mod(mul_mod(theta, l, N) - 2 * (q % N) * pos_mod(dl, N) - k, N) == 0) {
        by_congruence.push_back({k, l, 0.0});
      }
    }
  }

  // Shifted lattice: (4q^2)^{-1} (U [nM; mN] + s).
  const std::int64_t inv = mod_inverse(mul_mod(4 * q, q, mn), mn);
  const std::int64_t two_q = mul_mod(2, q, mn);
  const std::int64_t s_k = pos_mod(mul_mod(mul_mod(two_q, theta, mn), dk, mn) - mul_mod(two_q, dl, mn), mn);
  const std::int64_t s_l = pos_mod(mul_mod(two_q, dk, mn) - mul_mod(mul_mod(4 * q, q, mn), dl, mn), mn);
  std::vector<LatticePoint> by_lattice;
  by_lattice.reserve(static_cast<std::size_t>(mn));
  for (std::int64_t n = 0; n < N; ++n) {
    for (std::int64_t m = 0; m < M; ++m) {
      const std::int64_t a = n * M;
      const std::int64_t b = m * N;
      const std::int64_t k = mul_mod(inv, mul_mod(theta, a, mn) + b + s_k, mn);
      const std::int64_t l = mul_mod(inv, a + mul_mod(two_q, b, mn) + s_l, mn);
      by_lattice.push_back({k, l, 0.0});
    }
  }
  std::sort(by_lattice.begin(), by_lattice.end());
  if (by_lattice != by_congruence) {
    throw NumericalError("predict_cross_support: congruence and shifted-lattice forms disagree");
  }
  return by_lattice;
}

namespace {

int min_distance_to_region(const std::vector<LatticePoint>& pts, std::int64_t mn, const ReadoffRegion& region,
                           Lag& nearest) {
  int best = std::numeric_limits<int>::max();
  for (const LatticePoint& p : pts) {
    for (std::int64_t k : {p.k, p.k - mn}) {
      for (std::int64_t l : {p.l, p.l - mn}) {
        const Lag lag{static_cast<int>(k), static_cast<int>(l)};
        const int d = chebyshev_distance(lag, region.lags());
        if (d < best) {
          best = d;
          nearest = lag;
        }
      }
    }
  }
  return best;
}

}  // namespace

PilotSetReport validate_pilot_set(std::span<const SpreadPilotConfig> cfgs, const DDGrid& grid,
                                  const ReadoffRegion& region, int margin) {
  PilotSetReport report;
  report.margin = margin;
  for (std::size_t j = 0; j < cfgs.size(); ++j) {
    for (std::size_t v = 0; v < cfgs.size(); ++v) {
      if (v == j) continue;
      PilotPairReport pr;
      pr.v = v;
      pr.j = j;
      std::vector<LatticePoint> pts;
      try {
        pts = predict_cross_support(cfgs[j], cfgs[v], grid);
      } catch (const DomainError& e) {
        report.pass = false;
        report.warnings.push_back("pilots " + std::to_string(v) + " -> " + std::to_string(j) + ": " + e.what());
        report.pairs.push_back(pr);
        continue;
      }
      pr.min_distance = min_distance_to_region(pts, grid.size(), region, pr.nearest);
      pr.pass = pr.min_distance > margin;
      if (!pr.pass) {
        report.pass = false;
        std::ostringstream os;
        os << "pilots " << v << " -> " << j << ": cross-lattice point (" << pr.nearest.k << ", " << pr.nearest.l
           << ") lies " << pr.min_distance << " bins from the read-off region (margin " << margin << ")";
        report.warnings.push_back(os.str());
      }
      report.pairs.push_back(pr);
    }
  }
  return report;
}

}  // namespace zotfs

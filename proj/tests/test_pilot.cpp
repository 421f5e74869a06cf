// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "zotfs/pilot.hpp"
#include "zotfs/region.hpp"

using namespace zotfs;

namespace {

const DDGrid kSmall(5, 7, 30e3);
const DDGrid kFull(31, 37, 30e3);

using PointSet = std::set<std::pair<std::int64_t, std::int64_t>>;

PointSet as_set(const std::vector<LatticePoint>& pts) {
  PointSet s;
  for (const LatticePoint& p : pts) s.insert({p.k, p.l});
  return s;
}

std::int64_t wrap(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

}  // namespace

TEST_CASE("modular inverse") {
  CHECK(mod_inverse(2, 35) == 18);
  CHECK(mod_inverse(1, 35) == 1);
  CHECK(mod_inverse(-2, 35) == 17);
  CHECK_THROWS_AS(mod_inverse(5, 35), DomainError);
  CHECK_THROWS_AS(mod_inverse(0, 35), DomainError);
  for (std::int64_t m : {35, 77, 143, 1147}) {
    for (std::int64_t a = 1; a < m; ++a) {
      if (gcd64(a, m) != 1) continue;
      const std::int64_t inv = mod_inverse(a, m);
      CHECK(inv >= 0);
      CHECK(inv < m);
      CHECK((a * inv) % m == 1);
    }
  }
  CHECK(lattice_theta(1, kSmall) == 16);
}

TEST_CASE("lattice preconditions") {
  CHECK_NOTHROW(require_lattice_conditions({0, 0, 1}, kSmall));
  CHECK_NOTHROW(require_lattice_conditions({0, 0, 3}, kSmall));
  CHECK_THROWS_AS(require_lattice_conditions({0, 0, 5}, kSmall), DomainError);
  CHECK_THROWS_AS(require_lattice_conditions({0, 0, 14}, kSmall), DomainError);
  CHECK_THROWS_AS(require_lattice_conditions({0, 0, 1}, DDGrid(4, 7, 30e3)), DomainError);
  CHECK_THROWS_AS(require_lattice_conditions({0, 0, 1}, DDGrid(9, 7, 30e3)), DomainError);
  CHECK_THROWS_AS(predict_self_support({0, 0, 7}, kSmall), DomainError);
  CHECK_THROWS_AS(predict_cross_support({0, 0, 1}, {1, 0, 2}, kSmall), DomainError);
}

TEST_CASE("spread pilot construction") {
  SUBCASE("unit energy") {
    for (const SpreadPilotConfig cfg : {SpreadPilotConfig{0, 0, 1}, SpreadPilotConfig{3, 5, 2},
                                        SpreadPilotConfig{4, 6, 3}, SpreadPilotConfig{1, 0, 11}}) {
      const QuasiPeriodicSignal xs = build_spread_pilot(cfg, kSmall);
      CHECK(xs.fundamental().squaredNorm() == doctest::Approx(1.0).epsilon(1e-10));
    }
    const QuasiPeriodicSignal big = build_spread_pilot({1, 0, 1}, kFull);
    CHECK(big.fundamental().squaredNorm() == doctest::Approx(1.0).epsilon(1e-10));
  }

  SUBCASE("chirp spreads a point uniformly") {
    const QuasiPeriodicSignal xs = build_spread_pilot({0, 0, 1}, kSmall);
    for (int k = 0; k < 5; ++k) {
      for (int l = 0; l < 7; ++l) CHECK(std::abs(std::abs(xs(k, l)) - 1.0 / std::sqrt(35.0)) < 1e-12);
    }
  }

  SUBCASE("closed form equals chirp filtering of the point pilot") {
    for (int kp = 0; kp < 5; ++kp) {
      for (int lp = 0; lp < 7; ++lp) {
        for (std::int64_t q : {1, 2, 3}) {
          const QuasiPeriodicSignal a = build_spread_pilot({kp, lp, q}, kSmall);
          const QuasiPeriodicSignal b = oracle::spread_pilot_by_filtering(kp, lp, q, kSmall);
          CHECK((a.fundamental() - b.fundamental()).cwiseAbs().maxCoeff() < 1e-10);
        }
      }
    }
  }

  SUBCASE("pilot location outside the fundamental domain") {
    CHECK_THROWS_AS(build_spread_pilot({5, 0, 1}, kSmall), ConfigError);
    CHECK_THROWS_AS(build_spread_pilot({0, 7, 1}, kSmall), ConfigError);
    CHECK_THROWS_AS(build_spread_pilot({-1, 0, 1}, kSmall), ConfigError);
  }
}

TEST_CASE("self-ambiguity lattice") {
  SUBCASE("worked point") {
    const auto pts = predict_self_support({0, 0, 1}, kSmall);
    const PointSet s = as_set(pts);
    CHECK(s.size() == 35);
    CHECK(s.contains({0, 0}));
    CHECK(s.contains({20, 10}));
    CHECK(wrap(2 * 20 - 10, 5) == 0);
    CHECK(wrap(16 * 10 - 20, 7) == 0);
    for (const LatticePoint& p : pts) {
      if (p.k == 0 && p.l == 0) CHECK(p.theta == 0.0);
    }
  }

  SUBCASE("congruence form by exhaustive search") {
    for (std::int64_t q : {1, 2, 3}) {
      const std::int64_t theta = lattice_theta(q, kSmall);
      PointSet brute;
      for (std::int64_t k = 0; k < 35; ++k) {
        for (std::int64_t l = 0; l < 35; ++l) {
          if (wrap(2 * q * k - l, 5) == 0 && wrap(theta * l - k, 7) == 0) brute.insert({k, l});
        }
      }
      CHECK(as_set(predict_self_support({0, 0, q}, kSmall)) == brute);
    }
  }

  SUBCASE("predicted lattice equals the brute-force support") {
    for (const auto& [grid, q] : {std::pair{kSmall, std::int64_t{1}}, std::pair{kSmall, std::int64_t{3}},
                                  std::pair{DDGrid(7, 11, 30e3), std::int64_t{1}}}) {
      const SpreadPilotConfig cfg{2, 1, q};
      const QuasiPeriodicSignal xs = build_spread_pilot(cfg, grid);
      const PointSet pred = as_set(predict_self_support(cfg, grid));
      CHECK(pred.size() == static_cast<std::size_t>(grid.size()));
      CHECK(pred == oracle::ambiguity_support(xs, xs));
      const oracle::UnimodularCheck c = oracle::check_unimodular_support(xs, xs, pred);
      CHECK(c.on_support < 1e-9);
      CHECK(c.off_support < 1e-9);
    }
  }

  SUBCASE("lattice phases match the ambiguity") {
    const SpreadPilotConfig cfg{0, 0, 1};
    const QuasiPeriodicSignal xs = build_spread_pilot(cfg, kSmall);
    for (const LatticePoint& p : predict_self_support(cfg, kSmall)) {
      const Complex a = oracle::ambiguity_sum(xs, xs, p.k, p.l);
      CHECK(std::abs(a - std::polar(1.0, p.theta)) < 1e-9);
    }
  }
}

TEST_CASE("cross-ambiguity lattice") {
  SUBCASE("equal configurations reproduce the self lattice") {
    for (const SpreadPilotConfig cfg : {SpreadPilotConfig{0, 0, 1}, SpreadPilotConfig{3, 2, 3}}) {
      CHECK(as_set(predict_cross_support(cfg, cfg, kSmall)) == as_set(predict_self_support(cfg, kSmall)));
    }
  }

  SUBCASE("pilots (0,0) and (1,0)") {
    const SpreadPilotConfig c1{0, 0, 1};
    const SpreadPilotConfig c2{1, 0, 1};
    const PointSet pred = as_set(predict_cross_support(c1, c2, kSmall));
    const oracle::UnimodularCheck c =
        oracle::check_unimodular_support(build_spread_pilot(c2, kSmall), build_spread_pilot(c1, kSmall), pred);
    CHECK(c.support_size == 35);
    CHECK(c.on_support < 1e-9);
    CHECK(c.off_support < 1e-9);
  }

  SUBCASE("shifted lattice is a coset of the self lattice") {
    const SpreadPilotConfig cj{0, 0, 1};
    for (const SpreadPilotConfig cv : {SpreadPilotConfig{1, 0, 1}, SpreadPilotConfig{0, 1, 1},
                                       SpreadPilotConfig{4, 4, 1}}) {
      const auto cross = predict_cross_support(cj, cv, kFull);
      const auto self = predict_self_support(cj, kFull);
      const std::int64_t mn = kFull.size();
      PointSet shifted;
      for (const LatticePoint& s : self) shifted.insert({wrap(s.k + cross[0].k, mn), wrap(s.l + cross[0].l, mn)});
      CHECK(shifted == as_set(cross));
      CHECK_FALSE(as_set(cross).contains({0, 0}));
    }
  }

  SUBCASE("exhaustive agreement over small grids") {
    for (const auto& [grid, q] : {std::pair{kSmall, std::int64_t{1}}, std::pair{kSmall, std::int64_t{3}},
                                  std::pair{DDGrid(7, 11, 30e3), std::int64_t{1}}}) {
      std::vector<SpreadPilotConfig> cfgs;
      for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) cfgs.push_back({k, l, q});
      }
      std::vector<QuasiPeriodicSignal> xs;
      for (const auto& c : cfgs) xs.push_back(build_spread_pilot(c, grid));
      for (std::size_t j = 0; j < cfgs.size(); ++j) {
        for (std::size_t v = 0; v < cfgs.size(); ++v) {
          const PointSet pred = as_set(predict_cross_support(cfgs[j], cfgs[v], grid));
          const oracle::UnimodularCheck c = oracle::check_unimodular_support(xs[v], xs[j], pred);
          CHECK(c.support_size == static_cast<std::size_t>(grid.size()));
          CHECK(c.on_support < 1e-9);
          CHECK(c.off_support < 1e-9);
        }
      }
    }
  }

  SUBCASE("unique n1 and m1 for every n2 and m2") {
    const int M = 5;
    const int N = 7;
    const std::int64_t mn = 35;
    const std::int64_t q = 1;
    const SpreadPilotConfig p1{0, 0, q};
    const SpreadPilotConfig p2{1, 2, q};
    for (const LatticePoint& pt : predict_cross_support(p1, p2, kSmall)) {
      const std::int64_t k = pt.k;
      const std::int64_t l = pt.l;
      for (std::int64_t n2 = 0; n2 < N; ++n2) {
        int count = 0;
        std::int64_t n1_found = -1;
        for (std::int64_t n1 = 0; n1 < N; ++n1) {
          const std::int64_t r = 2 * q * k - l + M * (2 * n1 * q - 2 * n2 * q) + 2 * q * p1.k_p - 2 * q * p2.k_p;
          if (wrap(r, mn) == 0) {
            ++count;
            n1_found = n1;
          }
        }
        REQUIRE(count == 1);
        for (std::int64_t m2 = 0; m2 < M; ++m2) {
          int m_count = 0;
          for (std::int64_t m1 = 0; m1 < M; ++m1) {
            const std::int64_t r = 2 * q * p1.l_p - 2 * q * p2.l_p + N * (2 * q * m1 - 2 * q * m2) + 2 * q * l +
                                   p2.k_p - p1.k_p + (n2 - n1_found) * M;
            if (wrap(r, mn) == 0) ++m_count;
          }
          CHECK(m_count == 1);
        }
      }
    }
  }
}

TEST_CASE("pilot set validation") {
  const ReadoffRegion s;
  const std::vector<SpreadPilotConfig> three{{0, 0, 1}, {1, 0, 1}, {0, 1, 1}};
  const PilotSetReport r3 = validate_pilot_set(three, kFull, s);
  CHECK(r3.pass);
  CHECK(r3.pairs.size() == 6);
  for (const PilotPairReport& p : r3.pairs) CHECK(p.min_distance > 4);

  const std::vector<SpreadPilotConfig> two{{0, 0, 1}, {1, 0, 1}};
  CHECK(validate_pilot_set(two, kFull, s).pass);

  const std::vector<SpreadPilotConfig> near{{0, 0, 1}, {4, 4, 1}};
  const PilotSetReport bad = validate_pilot_set(near, kFull, s);
  CHECK_FALSE(bad.pass);
  CHECK_FALSE(bad.warnings.empty());

  const std::vector<SpreadPilotConfig> one{{0, 0, 1}};
  const PilotSetReport single = validate_pilot_set(one, kFull, s);
  CHECK(single.pass);
  CHECK(single.pairs.empty());
}

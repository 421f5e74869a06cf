// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "zotfs/channel.hpp"

using namespace zotfs;

TEST_CASE("Vehicular-A profile") {
  const VehAProfile prof;
  CHECK(prof.paths() == 6);
  CHECK(prof.max_delay_s() == doctest::Approx(2.51e-6));
  const auto p = prof.normalized_powers();
  double total = 0.0;
  for (double v : p) total += v;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p[0] / p[1] == doctest::Approx(std::pow(10.0, 0.1)));
  CHECK_NOTHROW(prof.validate());

  VehAProfile bad = prof;
  bad.powers_db.pop_back();
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = prof;
  bad.delays_us[2] = -0.1;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = prof;
  bad.delays_us.clear();
  bad.powers_db.clear();
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = prof;
  bad.nu_max_hz = -1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("ensemble power, delay and Doppler limits") {
  const VehAProfile prof;
  Rng rng(1);
  const int n = 100000;
  double power = 0.0;
  double max_nu = 0.0;
  double max_tau = 0.0;
  double min_tau = 1.0;
  for (int i = 0; i < n; ++i) {
    const auto ch = sample_veh_a(prof, rng);
    REQUIRE(ch.paths.size() == 6);
    power += ch.power();
    for (const Path& p : ch.paths) {
      max_nu = std::max(max_nu, std::abs(p.doppler_hz));
      max_tau = std::max(max_tau, p.delay_s);
      min_tau = std::min(min_tau, p.delay_s);
    }
  }
  CHECK(std::abs(power / n - 1.0) < 0.01);
  CHECK(max_nu <= 815.0);
  CHECK(max_tau == doctest::Approx(2.51e-6).epsilon(1e-15));
  CHECK(min_tau == 0.0);
}

TEST_CASE("Doppler follows the arcsine law") {
  const VehAProfile prof;
  Rng rng(2);
  std::vector<double> x;
  while (x.size() < 60000) {
    for (const Path& p : sample_veh_a(prof, rng).paths) x.push_back(p.doppler_hz / prof.nu_max_hz);
  }
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double cdf = 1.0 - std::acos(std::clamp(x[i], -1.0, 1.0)) / std::numbers::pi;
    d = std::max({d, std::abs(cdf - i / n), std::abs(cdf - (i + 1) / n)});
  }
  // Kolmogorov critical value at the 1% level
  CHECK(d < 1.628 / std::sqrt(n));
}

TEST_CASE("antenna pairs are independent") {
  const VehAProfile prof;
  Rng rng(3);
  const int n = 100000;
  Complex cross{};
  double pa = 0.0;
  double pb = 0.0;
  double nu_cross = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto chs = sample_veh_a_mimo(prof, 2, 2, rng);
    REQUIRE(chs.size() == 4);
    const Complex a = chs[0].paths[0].gain;
    const Complex b = chs[3].paths[0].gain;
    cross += a * std::conj(b);
    pa += std::norm(a);
    pb += std::norm(b);
    nu_cross += chs[1].paths[1].doppler_hz * chs[2].paths[1].doppler_hz;
  }
  CHECK(std::abs(cross) / std::sqrt(pa * pb) < 0.02);
  // E[cos^2] = 1/2
  CHECK(std::abs(nu_cross / n) / (0.5 * prof.nu_max_hz * prof.nu_max_hz) < 0.02);
}

TEST_CASE("identical seeds reproduce realizations bit for bit") {
  Rng a(99);
  Rng b(99);
  for (int i = 0; i < 50; ++i) {
    const auto x = sample_veh_a_mimo(VehAProfile{}, 2, 3, a);
    const auto y = sample_veh_a_mimo(VehAProfile{}, 2, 3, b);
    REQUIRE(x.size() == y.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
      for (std::size_t p = 0; p < x[j].paths.size(); ++p) {
        CHECK(x[j].paths[p].gain == y[j].paths[p].gain);
        CHECK(x[j].paths[p].delay_s == y[j].paths[p].delay_s);
        CHECK(x[j].paths[p].doppler_hz == y[j].paths[p].doppler_hz);
      }
    }
  }
}

TEST_CASE("deterministic fixtures") {
  const auto id = make_test_channel({{1.0, 0.0, 0.0}});
  REQUIRE(id.paths.size() == 1);
  CHECK(id.power() == 1.0);

  const auto two = make_test_channel({{1.0, 0.0, 0.0}, {1.0, 1e-6, 100.0}});
  CHECK(two.power() == 2.0);
  CHECK(two.paths[1].doppler_hz == 100.0);

  const double tau_bin = 1.0 / (31 * 30e3);
  const auto frac = make_test_channel({{1.0, 1.5 * tau_bin, 0.0}});
  CHECK(frac.paths[0].delay_s / tau_bin == doctest::Approx(1.5));
}

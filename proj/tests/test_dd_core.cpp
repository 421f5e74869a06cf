// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "td_chain.hpp"
#include "zotfs/ambiguity.hpp"
#include "zotfs/pilot.hpp"
#include "zotfs/region.hpp"
#include "zotfs/signals.hpp"
#include "zotfs/twisted_conv.hpp"
#include "zotfs/zak.hpp"

using namespace zotfs;

namespace {

const DDGrid kSmall(5, 7, 30e3);

double max_abs_diff(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

double max_abs_diff(const QuasiPeriodicSignal& a, const QuasiPeriodicSignal& b) {
  return max_abs_diff(a.fundamental(), b.fundamental());
}

}  // namespace

TEST_CASE("grid enforces the crystalline condition") {
  const DDGrid g(31, 37, 30e3);
  CHECK(g.delay_period() * g.doppler_period() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(g.bandwidth() == doctest::Approx(930e3));
  CHECK(g.duration() == doctest::Approx(37.0 / 30e3));
  CHECK_NOTHROW(DDGrid(31, 37, 1.0 / 30e3, 30e3));
  CHECK_THROWS_AS(DDGrid(31, 37, 1.1 / 30e3, 30e3), ConfigError);
  CHECK_THROWS_AS(DDGrid(0, 37, 30e3), ConfigError);
}

TEST_CASE("quasi-periodic extension follows the phase rule") {
  std::mt19937_64 rng(11);
  const QuasiPeriodicSignal x = oracle::random_signal(kSmall, rng);
  double worst = 0.0;
  for (int n = -2; n <= 2; ++n) {
    for (int m = -2; m <= 2; ++m) {
      for (int k = 0; k < 5; ++k) {
        for (int l = 0; l < 7; ++l) {
          const Complex expect = x(k, l) * std::polar(1.0, 2.0 * std::numbers::pi * n * l / 7.0);
          worst = std::max(worst, std::abs(x.at(k + n * 5, l + m * 7) - expect));
        }
      }
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("twisted convolution with taps") {
  std::mt19937_64 rng(5);

  SUBCASE("unit impulse at the origin is the identity") {
    const QuasiPeriodicSignal a = oracle::random_signal(kSmall, rng);
    const DDTaps delta = DDTaps::impulse(kSmall, {0, 0});
    CHECK(max_abs_diff(twisted_conv(a, delta), a) == 0.0);
    CHECK(max_abs_diff(twisted_conv(delta, a), a) == 0.0);
  }

  SUBCASE("two impulses, both operand orders") {
    const DDTaps d10 = DDTaps::impulse(kSmall, {1, 0});
    const DDTaps d01 = DDTaps::impulse(kSmall, {0, 1});
    // k' = 0 on the right operand: no phase
    const DDTaps ab = twisted_conv(d10, d01);
    REQUIRE(ab.size() == 1);
    CHECK(ab.taps()[0].lag == Lag{1, 1});
    CHECK(std::abs(ab.taps()[0].value - Complex(1.0, 0.0)) < 1e-15);
    // k' = 1, l - l' = 1 on the right operand: exp(j 2 pi / 35)
    const DDTaps ba = twisted_conv(d01, d10);
    REQUIRE(ba.size() == 1);
    CHECK(ba.taps()[0].lag == Lag{1, 1});
    CHECK(std::abs(ba.taps()[0].value - std::polar(1.0, 2.0 * std::numbers::pi / 35.0)) < 1e-15);
  }

  SUBCASE("matches the direct sum") {
    for (int trial = 0; trial < 20; ++trial) {
      const QuasiPeriodicSignal x = oracle::random_signal(kSmall, rng);
      const DDTaps h = oracle::random_taps(kSmall, 12, 9, 13, rng);
      CHECK(max_abs_diff(twisted_conv(h, x), oracle::twisted_conv_sum(h, x)) < 1e-10);
      CHECK(max_abs_diff(twisted_conv(x, h), oracle::twisted_conv_sum(x, h)) < 1e-10);
    }
  }

  SUBCASE("associativity against the triple sum") {
    for (int trial = 0; trial < 10; ++trial) {
      const DDTaps a = oracle::random_taps(kSmall, 6, 6, 8, rng);
      const DDTaps b = oracle::random_taps(kSmall, 6, 6, 8, rng);
      const QuasiPeriodicSignal c = oracle::random_signal(kSmall, rng);
      // sum a[ka, la] b[kb, lb] c[k - ka - kb, l - la - lb] exp(j 2 pi ((k - ka) la + (k - ka - kb) lb) / MN)
      CMatrix ref = CMatrix::Zero(5, 7);
      for (int k = 0; k < 5; ++k) {
        for (int l = 0; l < 7; ++l) {
          for (const Tap& ta : a.taps()) {
            for (const Tap& tb : b.taps()) {
              const std::int64_t kc = k - ta.lag.k - tb.lag.k;
              const std::int64_t lc = l - ta.lag.l - tb.lag.l;
              ref(k, l) += ta.value * tb.value * oracle::extended(c, kc, lc) *
                           oracle::root(static_cast<std::int64_t>(k - ta.lag.k) * ta.lag.l + kc * tb.lag.l, 35);
            }
          }
        }
      }
      CHECK(max_abs_diff(twisted_conv(twisted_conv(a, b), c).fundamental(), ref) < 1e-10);
      CHECK(max_abs_diff(twisted_conv(a, twisted_conv(b, c)).fundamental(), ref) < 1e-10);
      CHECK(max_abs_diff(oracle::twisted_conv_sum(a, oracle::twisted_conv_sum(b, c)).fundamental(), ref) < 1e-10);
    }
  }

  SUBCASE("taps on the right keep quasi-periodicity only on the period lattice") {
    const QuasiPeriodicSignal a = oracle::random_signal(kSmall, rng);
    auto extension_gap = [&](const DDTaps& b) {
      const QuasiPeriodicSignal out = twisted_conv(a, b);
      double gap = 0.0;
      for (int k = 0; k < 5; ++k) {
        for (int l = 0; l < 7; ++l) {
          Complex direct{};
          for (const Tap& t : b.taps()) {
            direct += oracle::extended(a, k + 5 - t.lag.k, l - t.lag.l) * t.value *
                      oracle::root(static_cast<std::int64_t>(t.lag.k) * (l - t.lag.l), 35);
          }
          gap = std::max(gap, std::abs(direct - out.at(k + 5, l)));
        }
      }
      return gap;
    };
    CHECK(extension_gap(DDTaps(kSmall, std::vector<Tap>{{{5, 7}, {0.5, -1.0}}, {{-10, 0}, {2.0, 0.0}}})) < 1e-12);
    CHECK(extension_gap(DDTaps::impulse(kSmall, {0, 1})) > 1e-3);
  }

  SUBCASE("two quasi-periodic operands need a lag support") {
    const QuasiPeriodicSignal a = oracle::random_signal(kSmall, rng);
    const QuasiPeriodicSignal b = oracle::random_signal(kSmall, rng);
    CHECK_THROWS_AS(twisted_conv(a, b, std::nullopt), ConfigError);
    CHECK_THROWS_AS(twisted_conv(a, b, std::span<const Lag>{}), ConfigError);
    const std::vector<Lag> support = LagBox{-2, 2, -3, 3}.lags();
    std::vector<Tap> taps;
    for (const Lag& lag : support) taps.push_back({lag, b.at(lag.k, lag.l)});
    const QuasiPeriodicSignal out = twisted_conv(a, b, std::span<const Lag>(support));
    CHECK(max_abs_diff(out, oracle::twisted_conv_sum(a, DDTaps(kSmall, std::move(taps)))) < 1e-10);
  }
}

TEST_CASE("MN-periodic twisted convolution") {
  std::mt19937_64 rng(9);
  const std::int64_t P = kSmall.size();
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix s(P, P);
  for (Eigen::Index i = 0; i < s.size(); ++i) s.data()[i] = {g(rng), g(rng)};
  const PeriodicDDSignal a(P, s);

  SUBCASE("impulse train at the origin is the identity") {
    CMatrix d = CMatrix::Zero(P, P);
    d(0, 0) = 1.0;
    CHECK(max_abs_diff(twisted_conv_periodic(a, PeriodicDDSignal(P, d)).samples(), a.samples()) < 1e-12);
  }

  SUBCASE("chirp applied to a point pilot gives the closed-form spread pilot") {
    const PeriodicDDSignal w = PeriodicDDSignal::chirp(kSmall, 1);
    const PeriodicDDSignal p = PeriodicDDSignal::from_quasi_periodic(QuasiPeriodicSignal::impulse(kSmall, 0, 0));
    const QuasiPeriodicSignal xs = twisted_conv_periodic(w, p).fundamental(kSmall);
    CHECK(max_abs_diff(xs, build_spread_pilot({0, 0, 1}, kSmall)) < 1e-10);
  }

  SUBCASE("unimodular chirp preserves energy") {
    for (std::int64_t q : {1, 2, 3}) {
      const PeriodicDDSignal out = twisted_conv_periodic(a, PeriodicDDSignal::chirp(kSmall, q));
      CHECK(std::abs(out.period_energy() - a.period_energy()) < 1e-10 * a.period_energy());
    }
  }

  SUBCASE("period mismatch") {
    CHECK_THROWS_AS(twisted_conv_periodic(a, PeriodicDDSignal(P + 1, CMatrix::Zero(P + 1, P + 1))), DomainError);
  }
}

TEST_CASE("cross-ambiguity") {
  std::mt19937_64 rng(21);

  SUBCASE("zero lag is the energy") {
    const QuasiPeriodicSignal a = oracle::random_signal(kSmall, rng);
    CHECK(std::abs(cross_ambiguity_at(a, a, {0, 0}) - Complex(a.energy(), 0.0)) < 1e-12 * a.energy());
    const QuasiPeriodicSignal unit = a * Complex(1.0 / std::sqrt(a.energy()), 0.0);
    CHECK(std::abs(cross_ambiguity_at(unit, unit, {0, 0}) - Complex(1.0, 0.0)) < 1e-12);
  }

  SUBCASE("matches the direct sum, including lags outside one period") {
    const QuasiPeriodicSignal a = oracle::random_signal(kSmall, rng);
    const QuasiPeriodicSignal b = oracle::random_signal(kSmall, rng);
    const LagBox box{-40, 40, -12, 45};
    const AmbiguitySurface surf = cross_ambiguity(a, b, box);
    CHECK(surf.values().rows() == box.delay_extent());
    CHECK(surf.values().cols() == box.doppler_extent());
    double worst = 0.0;
    for (const Lag& lag : box.lags()) {
      const Complex ref = oracle::ambiguity_sum(a, b, lag.k, lag.l);
      worst = std::max(worst, std::abs(surf.at(lag) - ref));
    }
    CHECK(worst < 1e-10);
    const std::vector<Lag> lags{{-3, 2}, {0, 0}, {17, 30}};
    const std::vector<Complex> listed = cross_ambiguity(a, b, std::span<const Lag>(lags));
    for (std::size_t i = 0; i < lags.size(); ++i) CHECK(std::abs(listed[i] - surf.at(lags[i])) < 1e-12);
  }

  SUBCASE("spread pilot self-ambiguity is unimodular on its lattice") {
    const QuasiPeriodicSignal xs = build_spread_pilot({0, 0, 1}, kSmall);
    std::set<std::pair<std::int64_t, std::int64_t>> lattice;
    for (const LatticePoint& p : predict_self_support({0, 0, 1}, kSmall)) lattice.insert({p.k, p.l});
    const oracle::UnimodularCheck c = oracle::check_unimodular_support(xs, xs, lattice);
    CHECK(c.support_size == 35);
    CHECK(c.on_support < 1e-9);
    CHECK(c.off_support < 1e-9);
  }

  SUBCASE("same-slope cross-ambiguity sits on the shifted lattice") {
    const QuasiPeriodicSignal x1 = build_spread_pilot({0, 0, 1}, kSmall);
    const QuasiPeriodicSignal x2 = build_spread_pilot({1, 0, 1}, kSmall);
    std::set<std::pair<std::int64_t, std::int64_t>> lattice;
    for (const LatticePoint& p : predict_cross_support({0, 0, 1}, {1, 0, 1}, kSmall)) lattice.insert({p.k, p.l});
    const oracle::UnimodularCheck c = oracle::check_unimodular_support(x2, x1, lattice);
    CHECK(c.on_support < 1e-9);
    CHECK(c.off_support < 1e-9);
  }
}

TEST_CASE("data symbol placement") {
  SUBCASE("all-ones BPSK") {
    const QuasiPeriodicSignal x = place_data_symbols(CMatrix::Ones(5, 7), kSmall);
    CHECK((x.fundamental().array() - 1.0 / std::sqrt(35.0)).abs().maxCoeff() < 1e-15);
    CHECK(x.energy() == doctest::Approx(1.0).epsilon(1e-14));
  }

  SUBCASE("random BPSK frames have unit energy") {
    std::mt19937_64 rng(3);
    std::bernoulli_distribution bit(0.5);
    double sum = 0.0;
    const int frames = 10000;
    for (int f = 0; f < frames; ++f) {
      CMatrix s(5, 7);
      for (Eigen::Index i = 0; i < s.size(); ++i) s.data()[i] = bit(rng) ? 1.0 : -1.0;
      sum += place_data_symbols(s, kSmall).energy();
    }
    CHECK(std::abs(sum / frames - 1.0) < 1e-12);
  }

  SUBCASE("single symbol") {
    CMatrix s = CMatrix::Zero(5, 7);
    s(2, 3) = 1.0;
    const QuasiPeriodicSignal x = place_data_symbols(s, kSmall);
    CHECK(std::abs(x(2, 3) - 1.0 / std::sqrt(35.0)) < 1e-15);
    CHECK(x.energy() == doctest::Approx(1.0 / 35.0));
  }

  SUBCASE("shape mismatch") { CHECK_THROWS_AS(place_data_symbols(CMatrix::Ones(7, 5), kSmall), DomainError); }
}

TEST_CASE("vectorization") {
  CHECK(vector_index(kSmall, 0, 0) == 0);
  CHECK(vector_index(kSmall, 1, 0) == 7);
  CHECK(vector_index(kSmall, 4, 6) == 34);

  std::mt19937_64 rng(8);
  const QuasiPeriodicSignal x = oracle::random_signal(kSmall, rng);
  const CVector v = vectorize(x);
  CHECK(v(vector_index(kSmall, 3, 5)) == x(3, 5));
  CHECK(max_abs_diff(devectorize(v, kSmall), x) == 0.0);
  CHECK_THROWS_AS(devectorize(CVector::Zero(34), kSmall), DomainError);

  for (auto [M, N] : {std::pair{1, 1}, {5, 7}, {31, 37}, {1, 10000}, {100, 100}, {97, 103}}) {
    const DDGrid g(M, N, 30e3);
    std::vector<int> hits(static_cast<std::size_t>(g.size()), 0);
    for (int k = 0; k < M; ++k) {
      for (int l = 0; l < N; ++l) ++hits[static_cast<std::size_t>(vector_index(g, k, l))];
    }
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  }
}

TEST_CASE("sampled Zak transforms") {
  std::mt19937_64 rng(17);
  const int Q = 16;

  SUBCASE("inverse then forward on a band-limited surface") {
    CMatrix s = CMatrix::Zero(5, 7);
    for (Eigen::Index i = 0; i < s.size(); ++i) s.data()[i] = (rng() & 1U) ? 1.0 : -1.0;
    const QuasiPeriodicSignal x = place_data_symbols(s, kSmall);
    const ZakSamples a = oracle::transmit_surface(x, GaussianSincFilter::for_grid(kSmall), 0.0);
    const TimeSeries td = inverse_zak_sampled(a, -6, 7 + 12);
    const ZakSamples back = zak_transform_sampled(td, kSmall, Q, 0.0);
    CHECK((back.values() - a.values()).norm() / a.values().norm() < 1e-3);
  }

  SUBCASE("tone at half the Doppler period") {
    const double f = kSmall.doppler_period() / 2.0;
    const int R = Q * 5;
    const int C = Q * 7;
    TimeSeries td;
    td.dt = kSmall.delay_period() / R;
    td.samples.resize(static_cast<Eigen::Index>(R) * C);
    for (Eigen::Index n = 0; n < td.samples.size(); ++n) td.samples(n) = std::polar(1.0, 2.0 * std::numbers::pi * f * td.time(n));
    const ZakSamples z = zak_transform_sampled(td, kSmall, Q, 0.0);
    const double peak = std::sqrt(kSmall.delay_period()) * C;
    double flat = 0.0;
    double leak = 0.0;
    for (int i = 0; i < R; ++i) {
      flat = std::max(flat, std::abs(std::abs(z.values()(i, C / 2)) - peak));
      for (int j = 0; j < C; ++j) {
        if (j != C / 2) leak = std::max(leak, std::abs(z.values()(i, j)));
      }
    }
    CHECK(flat < 1e-9 * peak);
    CHECK(leak < 1e-9 * peak);
  }

  SUBCASE("linearity") {
    TimeSeries a;
    TimeSeries b;
    a.dt = b.dt = kSmall.delay_period() / (Q * 5);
    a.samples = oracle::random_fundamental(DDGrid(Q * 5 * 9, 1, 30e3), rng).col(0);
    b.samples = oracle::random_fundamental(DDGrid(Q * 5 * 9, 1, 30e3), rng).col(0);
    TimeSeries sum = a;
    sum.samples += b.samples;
    const CMatrix lhs = zak_transform_sampled(sum, kSmall, Q).values();
    const CMatrix rhs = zak_transform_sampled(a, kSmall, Q).values() + zak_transform_sampled(b, kSmall, Q).values();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12 * rhs.cwiseAbs().maxCoeff());
  }

  SUBCASE("argument checks") {
    TimeSeries shortseries;
    shortseries.dt = kSmall.delay_period() / (Q * 5);
    shortseries.samples = CVector::Zero(Q * 5 * 3);
    CHECK_THROWS_AS(zak_transform_sampled(shortseries, kSmall, Q), DomainError);
    TimeSeries wrong = shortseries;
    wrong.dt *= 1.5;
    wrong.samples = CVector::Zero(Q * 5 * 20);
    CHECK_THROWS_AS(zak_transform_sampled(wrong, kSmall, Q), ConfigError);
  }
}

TEST_CASE("critically sampled delay-domain map is unitary") {
  std::mt19937_64 rng(4);
  const DDGrid g(11, 13, 30e3);
  const QuasiPeriodicSignal x = oracle::random_signal(g, rng);
  const CVector s = to_delay_domain(x);
  CHECK(s.squaredNorm() == doctest::Approx(x.energy()).epsilon(1e-12));
  CHECK(max_abs_diff(from_delay_domain(s, g), x) < 1e-12);
}

// SPDX-License-Identifier: Apache-2.0

#include "zotfs/zak.hpp"

#include <cmath>
#include <string>

namespace zotfs {

ZakSamples::ZakSamples(const DDGrid& grid, int q_delay, int q_doppler, double tau0, CMatrix values)
    : grid_(grid), q_delay_(q_delay), q_doppler_(q_doppler), tau0_(tau0), values_(std::move(values)) {
  if (q_delay < 1 || q_doppler < 1) throw ConfigError("ZakSamples: oversampling factors must be >= 1");
  if (values_.rows() != static_cast<Eigen::Index>(q_delay) * grid.M() ||
      values_.cols() != static_cast<Eigen::Index>(q_doppler) * grid.N()) {
    throw DomainError("ZakSamples: value array does not match the oversampled grid");
  }
}

Complex ZakSamples::at(std::int64_t i, std::int64_t j) const {
  const std::int64_t R = values_.rows();
  const std::int64_t C = values_.cols();
  const std::int64_t n = floor_div(i, R);
  const Complex v = values_(i - n * R, pos_mod(j, C));
  if (n == 0) return v;
  // exp(j 2 pi nu_j n tau_p) with nu_j tau_p = j / C
  const std::int64_t e = mul_mod(n, j, C);
  return v * std::polar(1.0, kTwoPi<double> * static_cast<double>(e) / static_cast<double>(C));
}

ZakSamples zak_transform_sampled(const TimeSeries& td, const DDGrid& grid, int q, double tau0, int q_doppler) {
  if (q < 1) throw ConfigError("zak_transform_sampled: oversampling factor must be >= 1");
  if (q_doppler == 0) q_doppler = q;
  if (q_doppler < 1) throw ConfigError("zak_transform_sampled: Doppler oversampling must be >= 1");
  const double expected_dt = 1.0 / (q * grid.bandwidth());
  if (std::abs(td.dt / expected_dt - 1.0) > 1e-9) {
    throw ConfigError("zak_transform_sampled: sample spacing must be 1 / (q B)");
  }
  if (td.span() < grid.duration() * (1.0 - 1e-9)) {
    throw DomainError("zak_transform_sampled: time series spans " + std::to_string(td.span()) +
                      " s, shorter than the frame duration " + std::to_string(grid.duration()) + " s");
  }
  const double offset_f = (tau0 - td.t0) / td.dt;
  const double offset_r = std::round(offset_f);
  if (std::abs(offset_f - offset_r) > 1e-6) throw ConfigError("zak_transform_sampled: tau0 is not on the sample grid");
  const auto offset = static_cast<std::int64_t>(offset_r);

  const std::int64_t R = static_cast<std::int64_t>(q) * grid.M();
  const std::int64_t C = static_cast<std::int64_t>(q_doppler) * grid.N();
  const std::int64_t L = td.samples.size();
  const UnitRoots w(C);
  const double scale = std::sqrt(grid.delay_period());

  CMatrix values = CMatrix::Zero(R, C);
  for (std::int64_t i = 0; i < R; ++i) {
    const std::int64_t base = offset + i;
    const std::int64_t k_lo = -floor_div(base, R);  // smallest k with base + kR >= 0
    for (std::int64_t k = k_lo; base + k * R < L; ++k) {
      const Complex s = td.samples(base + k * R) * scale;
      for (std::int64_t j = 0; j < C; ++j) values(i, j) += s * w(-j * k);
    }
  }
  return {grid, q, q_doppler, tau0, std::move(values)};
}

TimeSeries inverse_zak_sampled(const ZakSamples& dd, int first_period, int num_periods) {
  if (num_periods < 1) throw ConfigError("inverse_zak_sampled: need at least one period");
  const DDGrid& g = dd.grid();
  const std::int64_t R = dd.values().rows();
  const std::int64_t C = dd.values().cols();
  const UnitRoots w(C);
  // sqrt(tau_p) * (nu_p / C) Riemann weight
  const double scale = std::sqrt(g.delay_period()) * g.doppler_period() / static_cast<double>(C);

  TimeSeries out;
  out.dt = g.delay_period() / static_cast<double>(R);
  out.t0 = dd.tau0() + first_period * g.delay_period();
  out.samples = CVector::Zero(R * num_periods);
  for (int p = 0; p < num_periods; ++p) {
    const std::int64_t k = static_cast<std::int64_t>(first_period) + p;
    for (std::int64_t i = 0; i < R; ++i) {
      Complex acc{};
      for (std::int64_t j = 0; j < C; ++j) acc += dd.values()(i, j) * w(j * k);
      out.samples(p * R + i) = acc * scale;
    }
  }
  return out;
}

CVector to_delay_domain(const QuasiPeriodicSignal& x) {
  const DDGrid& g = x.grid();
  const int M = g.M();
  const int N = g.N();
  const UnitRoots w(N);
  const double scale = 1.0 / std::sqrt(static_cast<double>(N));
  CVector s = CVector::Zero(g.size());
  for (int k = 0; k < M; ++k) {
    for (int n = 0; n < N; ++n) {
      Complex acc{};
      for (int l = 0; l < N; ++l) acc += x(k, l) * w(static_cast<std::int64_t>(n) * l);
      s(k + static_cast<Eigen::Index>(n) * M) = acc * scale;
    }
  }
  return s;
}

QuasiPeriodicSignal from_delay_domain(const CVector& s, const DDGrid& grid) {
  if (s.size() != grid.size()) throw DomainError("from_delay_domain: length differs from MN");
  const int M = grid.M();
  const int N = grid.N();
  const UnitRoots w(N);
  const double scale = 1.0 / std::sqrt(static_cast<double>(N));
  CMatrix f(M, N);
  for (int k = 0; k < M; ++k) {
    for (int l = 0; l < N; ++l) {
      Complex acc{};
      for (int n = 0; n < N; ++n) acc += s(k + static_cast<Eigen::Index>(n) * M) * w(-static_cast<std::int64_t>(n) * l);
      f(k, l) = acc * scale;
    }
  }
  return {grid, std::move(f)};
}

}  // namespace zotfs

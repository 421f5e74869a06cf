// SPDX-License-Identifier: Apache-2.0
//
// Sampled Zak transforms. Continuous forms:
//   Z_t(s)(tau, nu)      = sqrt(tau_p) sum_k s(tau + k tau_p) exp(-j 2 pi nu k tau_p)
//   Z_t^{-1}(a)(t)       = sqrt(tau_p) int_0^{nu_p} a(t, nu) d nu
// The oversampled versions below are Riemann discretizations used only by the
// time-domain verification path. The critically sampled delay-domain map at the
// bottom is the unitary discrete Zak pair used by the detector.

#pragma once

#include "zotfs/grid.hpp"
#include "zotfs/signals.hpp"

namespace zotfs {

/// Uniformly sampled time-domain signal s(t0 + n dt).
struct TimeSeries {
  double t0 = 0.0;
  double dt = 1.0;
  CVector samples;

  double time(Eigen::Index n) const { return t0 + static_cast<double>(n) * dt; }
  double span() const { return static_cast<double>(samples.size()) * dt; }
};

/// Dense DD samples on the oversampled fundamental domain:
///   tau_i = tau0 + i / (q_delay B),   i in [0, q_delay M)
///   nu_j  = j nu_p / (q_doppler N),   j in [0, q_doppler N)
/// Samples outside follow a(tau + n tau_p, nu) = exp(j 2 pi nu n tau_p) a(tau, nu) and nu_p-periodicity in nu.
class ZakSamples {
 public:
  ZakSamples(const DDGrid& grid, int q_delay, int q_doppler, double tau0, CMatrix values);

  const DDGrid& grid() const { return grid_; }
  int q_delay() const { return q_delay_; }
  int q_doppler() const { return q_doppler_; }
  double tau0() const { return tau0_; }
  const CMatrix& values() const { return values_; }

  double tau(std::int64_t i) const { return tau0_ + static_cast<double>(i) * grid_.delay_resolution() / q_delay_; }
  double nu(std::int64_t j) const { return static_cast<double>(j) * grid_.doppler_resolution() / q_doppler_; }
  /// Extended sample at integer grid indices.
  Complex at(std::int64_t i, std::int64_t j) const;

 private:
  DDGrid grid_;
  int q_delay_;
  int q_doppler_;
  double tau0_;
  CMatrix values_;
};

/// Zak transform of a time series sampled at rate q B. The delay grid starts at
/// tau0, which must lie on the sample grid; every sample contributes to exactly
/// one delay bin. Throws DomainError when the series is shorter than T = N tau_p,
/// ConfigError when dt != 1 / (q B).
ZakSamples zak_transform_sampled(const TimeSeries& td, const DDGrid& grid, int q, double tau0 = 0.0,
                                 int q_doppler = 0);

/// Inverse Zak transform evaluated for delay periods [first_period, first_period + num_periods).
/// Output starts at tau0 + first_period tau_p with spacing 1 / (q_delay B).
TimeSeries inverse_zak_sampled(const ZakSamples& dd, int first_period, int num_periods);

/// Critically sampled discrete Zak pair: s[k + nM] = N^{-1/2} sum_l x[k, l] exp(j 2 pi n l / N).
/// Unitary; maps twisted convolution by a tap (dk, dl) to a cyclic delay by dk
/// samples followed by modulation exp(j 2 pi dl (t - dk) / MN).
CVector to_delay_domain(const QuasiPeriodicSignal& x);
QuasiPeriodicSignal from_delay_domain(const CVector& s, const DDGrid& grid);

}  // namespace zotfs

// SPDX-License-Identifier: Apache-2.0
//
// Gaussian-sinc delay-Doppler pulse shaping and effective channel synthesis.

#pragma once

#include <cmath>
#include <numbers>
#include <span>

#include "zotfs/channel.hpp"
#include "zotfs/grid.hpp"
#include "zotfs/signals.hpp"

namespace zotfs {

/// sinc(x) exp(-alpha x^2), sinc(x) = sin(pi x) / (pi x).
template <typename Real>
Real gaussian_sinc(Real x, Real alpha) {
  const Real px = std::numbers::pi_v<Real> * x;
  const Real s = std::abs(px) < Real(1e-8) ? Real(1) - px * px / Real(6) : std::sin(px) / px;
  return s * std::exp(-alpha * x * x);
}

/// w_tx(tau, nu) = Omega_tau Omega_nu sqrt(BT) sinc(B tau) sinc(T nu) exp(-alpha_tau B^2 tau^2) exp(-alpha_nu T^2 nu^2).
struct GaussianSincFilter {
  double bandwidth;
  double duration;
  double alpha_tau = 0.044;
  double alpha_nu = 0.044;
  double omega_tau = 1.0278;
  double omega_nu = 1.0278;

  static GaussianSincFilter for_grid(const DDGrid& grid) { return {grid.bandwidth(), grid.duration()}; }

  /// Delay factor Omega_tau sqrt(B) sinc(B tau) exp(-alpha_tau (B tau)^2).
  double delay_profile(double tau) const {
    return omega_tau * std::sqrt(bandwidth) * gaussian_sinc(bandwidth * tau, alpha_tau);
  }
  /// Doppler factor Omega_nu sqrt(T) sinc(T nu) exp(-alpha_nu (T nu)^2).
  double doppler_profile(double nu) const {
    return omega_nu * std::sqrt(duration) * gaussian_sinc(duration * nu, alpha_nu);
  }
};

Complex eval_tx_filter(double tau, double nu, const GaussianSincFilter& f);

/// Matched receive filter w_rx(tau, nu) = conj(w_tx(-tau, -nu)) exp(j 2 pi tau nu).
Complex eval_rx_filter(double tau, double nu, const GaussianSincFilter& f);

/// Trapezoid quadrature over [-half_width, half_width] bins of the filter variable.
struct QuadratureSpec {
  double half_width_delay_bins = 16.0;
  double half_width_doppler_bins = 16.0;
  double step_bins = 0.125;
  /// Recompute at half the step and fail when any tap moves by more than `tolerance` relative to the peak tap.
  bool check_convergence = false;
  double tolerance = 1e-6;
};

/// Samples of h_eff = w_rx *s h *s w_tx at (k tau_p / M, l nu_p / N) for each lag
/// in `support`. The Dirac convolutions with the paths are done in closed form;
/// for the separable matched Gaussian-sinc pair the remaining double integral
/// factors into one delay integral and one Doppler integral per path, each
/// evaluated by trapezoid quadrature.
DDTaps effective_channel_taps(const ChannelRealization& channel, const GaussianSincFilter& filter,
                              const DDGrid& grid, std::span<const Lag> support, const QuadratureSpec& quad = {});

}  // namespace zotfs

// SPDX-License-Identifier: Apache-2.0

#include "zotfs/pulse_shaping.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace zotfs {

Complex eval_tx_filter(double tau, double nu, const GaussianSincFilter& f) {
  return {f.delay_profile(tau) * f.doppler_profile(nu), 0.0};
}

Complex eval_rx_filter(double tau, double nu, const GaussianSincFilter& f) {
  return std::conj(eval_tx_filter(-tau, -nu, f)) * std::polar(1.0, kTwoPi<double> * tau * nu);
}

namespace {

struct Nodes {
  std::vector<double> x;  // node positions in bins
  std::vector<double> w;  // trapezoid weights in bins
};

Nodes make_nodes(double half_width, double step) {
  const auto n = static_cast<int>(std::llround(half_width / step));
  Nodes nodes;
  for (int i = -n; i <= n; ++i) {
    nodes.x.push_back(i * step);
    nodes.w.push_back((i == -n || i == n) ? 0.5 * step : step);
  }
  return nodes;
}

// h_eff[k, l] = sum_p h_p exp(j 2 pi nu_p (tau - tau_p)) F_p(tau) G_p(nu, tau), tau = k / B, nu = l / T, with
//   F_p = int f(-tau') f(tau - tau_p - tau') exp(-j 2 pi nu_p tau') d tau'
//   G_p = int g(-nu') g(nu - nu_p - nu') exp(j 2 pi nu' tau) d nu'
// The exp(j 2 pi tau' nu') of the matched filter cancels against the twisted-convolution phase.
std::vector<Complex> taps_with_step(const ChannelRealization& channel, const GaussianSincFilter& filter,
                                    const DDGrid& grid, std::span<const Lag> support, const QuadratureSpec& quad,
                                    double step) {
  std::vector<Complex> out(support.size());
  if (support.empty()) return out;

  const double B = filter.bandwidth;
  const double T = filter.duration;
  const double dtau = grid.delay_resolution();
  const double dnu = grid.doppler_resolution();
  const Nodes tn = make_nodes(quad.half_width_delay_bins, step);
  const Nodes nn = make_nodes(quad.half_width_doppler_bins, step);

  int k_min = support[0].k, k_max = support[0].k, l_min = support[0].l, l_max = support[0].l;
  for (const Lag& lag : support) {
    k_min = std::min(k_min, lag.k);
    k_max = std::max(k_max, lag.k);
    l_min = std::min(l_min, lag.l);
    l_max = std::max(l_max, lag.l);
  }
  const std::size_t nk = static_cast<std::size_t>(k_max - k_min + 1);
  const std::size_t nl = static_cast<std::size_t>(l_max - l_min + 1);
  const std::size_t nq = nn.x.size();

  std::vector<double> g_rx(nq);
  for (std::size_t i = 0; i < nq; ++i) g_rx[i] = filter.doppler_profile(-nn.x[i] / T) * nn.w[i] / T;

  std::vector<Complex> F(nk);
  std::vector<Complex> prefactor(nk);
  std::vector<double> g_tx(nl * nq);
  std::vector<Complex> g_phase(nk * nq);

  for (const Path& path : channel.paths) {
    const double tau_p = path.delay_s;
    const double nu_p = path.doppler_hz;
    for (std::size_t ik = 0; ik < nk; ++ik) {
      const double tau = (k_min + static_cast<int>(ik)) * dtau;
      Complex acc{};
      for (std::size_t i = 0; i < tn.x.size(); ++i) {
        const double tp = tn.x[i] / B;
        acc += filter.delay_profile(-tp) * filter.delay_profile(tau - tau_p - tp) *
               std::polar(tn.w[i] / B, -kTwoPi<double> * nu_p * tp);
      }
      F[ik] = acc;
      prefactor[ik] = path.gain * std::polar(1.0, kTwoPi<double> * nu_p * (tau - tau_p));
      for (std::size_t i = 0; i < nq; ++i) {
        g_phase[ik * nq + i] = std::polar(g_rx[i], kTwoPi<double> * (nn.x[i] / T) * tau);
      }
    }
    for (std::size_t il = 0; il < nl; ++il) {
      const double nu = (l_min + static_cast<int>(il)) * dnu;
      for (std::size_t i = 0; i < nq; ++i) g_tx[il * nq + i] = filter.doppler_profile(nu - nu_p - nn.x[i] / T);
    }
    for (std::size_t s = 0; s < support.size(); ++s) {
      const auto ik = static_cast<std::size_t>(support[s].k - k_min);
      const auto il = static_cast<std::size_t>(support[s].l - l_min);
      const Complex* ph = &g_phase[ik * nq];
      const double* gt = &g_tx[il * nq];
      Complex G{};
      for (std::size_t i = 0; i < nq; ++i) G += ph[i] * gt[i];
      out[s] += prefactor[ik] * F[ik] * G;
    }
  }
  return out;
}

}  // namespace

DDTaps effective_channel_taps(const ChannelRealization& channel, const GaussianSincFilter& filter,
                              const DDGrid& grid, std::span<const Lag> support, const QuadratureSpec& quad) {
  if (!(quad.step_bins > 0.0) || !(quad.half_width_delay_bins > 0.0) || !(quad.half_width_doppler_bins > 0.0)) {
    throw ConfigError("QuadratureSpec: step and half-widths must be positive");
  }
  std::vector<Complex> values = taps_with_step(channel, filter, grid, support, quad, quad.step_bins);
  if (quad.check_convergence) {
    const std::vector<Complex> fine = taps_with_step(channel, filter, grid, support, quad, quad.step_bins / 2.0);
    double peak = 0.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      peak = std::max(peak, std::abs(fine[i]));
      worst = std::max(worst, std::abs(fine[i] - values[i]));
    }
    if (peak > 0.0 && worst > quad.tolerance * peak) {
      throw NumericalError("effective_channel_taps: quadrature not converged (relative change " +
                           std::to_string(worst / peak) + " when halving the step)");
    }
  }
  return {grid, support, values};
}

}  // namespace zotfs

// SPDX-License-Identifier: Apache-2.0

#include "zotfs/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "zotfs/ambiguity.hpp"
#include "zotfs/twisted_conv.hpp"

namespace zotfs {

DetectionConfig EstimatorConfig::detection() const {
  DetectionConfig d;
  d.data_energy = data_energy;
  d.pilot_energy = pilot_energy;
  d.noise_variance = noise_variance;
  d.n_t = n_t;
  d.max_las_steps = max_las_steps;
  return d;
}

void EstimatorConfig::validate() const {
  detection().validate();
  if (!(pilot_energy > 0.0)) throw ConfigError("EstimatorConfig: pilot energy must be > 0");
  if (n_r < 1) throw ConfigError("EstimatorConfig: n_r must be >= 1");
}

double readoff_threshold(const DDGrid& grid, int n_t, double rho_d, double rho_p) {
  if (!(rho_p > 0.0)) throw ConfigError("readoff_threshold: pilot SNR must be > 0");
  return 3.0 * std::sqrt(static_cast<double>(n_t) / static_cast<double>(grid.size()) * (1.0 + rho_d) / rho_p);
}

DDTaps estimate_readoff(const QuasiPeriodicSignal& y, const QuasiPeriodicSignal& pilot, double pilot_energy, int n_t,
                        const ReadoffRegion& region, double threshold) {
  if (!(pilot_energy > 0.0)) throw ConfigError("estimate_readoff: pilot energy must be > 0");
  const double scale = std::sqrt(static_cast<double>(n_t) / pilot_energy);
  const std::vector<Complex> amb = cross_ambiguity(y, pilot, region.lags());
  std::vector<Tap> taps;
  for (std::size_t i = 0; i < amb.size(); ++i) {
    const Complex h = amb[i] * scale;
    if (std::abs(h) > threshold) taps.push_back({region.lags()[i], h});
  }
  return {y.grid(), std::move(taps)};
}

QuasiPeriodicSignal cancel_pilot(const QuasiPeriodicSignal& y, std::span<const DDTaps> taps,
                                 std::span<const QuasiPeriodicSignal> pilots, double pilot_energy, int n_t) {
  if (taps.size() != pilots.size()) throw DomainError("cancel_pilot: one tap set per pilot required");
  const double a = std::sqrt(pilot_energy / static_cast<double>(n_t));
  QuasiPeriodicSignal out = y;
  for (std::size_t j = 0; j < taps.size(); ++j) {
    if (taps[j].empty()) continue;
    out = out - twisted_conv(taps[j], pilots[j]) * a;
  }
  return out;
}

QuasiPeriodicSignal cancel_data(const QuasiPeriodicSignal& y, std::span<const DDTaps> taps,
                                std::span<const RMatrix> symbols, double data_energy, int n_t) {
  if (taps.size() != symbols.size()) throw DomainError("cancel_data: one tap set per symbol block required");
  const double a = std::sqrt(data_energy / static_cast<double>(n_t));
  QuasiPeriodicSignal out = y;
  for (std::size_t j = 0; j < taps.size(); ++j) {
    if (taps[j].empty()) continue;
    const QuasiPeriodicSignal xd = place_data_symbols(symbols[j].cast<Complex>(), y.grid());
    out = out - twisted_conv(taps[j], xd) * a;
  }
  return out;
}

namespace {

void check_inputs(std::span<const QuasiPeriodicSignal> y, std::span<const QuasiPeriodicSignal> pilots,
                  const EstimatorConfig& cfg) {
  cfg.validate();
  if (y.size() != static_cast<std::size_t>(cfg.n_r)) throw DomainError("turbo: expected n_r received signals");
  if (pilots.size() != static_cast<std::size_t>(cfg.n_t)) throw DomainError("turbo: expected n_t spread pilots");
}

std::span<const DDTaps> row(const std::vector<DDTaps>& taps, int i, int n_t) {
  return std::span<const DDTaps>(taps).subspan(static_cast<std::size_t>(i * n_t), static_cast<std::size_t>(n_t));
}

// Read-off, pilot cancellation and detection given the signals the taps are read from.
EstimatorState estimate_and_detect(int iteration, std::span<const QuasiPeriodicSignal> y,
                                   std::span<const QuasiPeriodicSignal> readoff_source,
                                   std::span<const QuasiPeriodicSignal> pilots, std::vector<double> thresholds,
                                   const EstimatorConfig& cfg) {
  const DDGrid& g = y.front().grid();
  EstimatorState st;
  st.iteration = iteration;
  st.thresholds = std::move(thresholds);
  for (int i = 0; i < cfg.n_r; ++i) {
    for (int j = 0; j < cfg.n_t; ++j) {
      st.taps.push_back(estimate_readoff(readoff_source[static_cast<std::size_t>(i)],
                                         pilots[static_cast<std::size_t>(j)], cfg.pilot_energy, cfg.n_t, cfg.region,
                                         st.thresholds[static_cast<std::size_t>(i)]));
    }
  }
  std::vector<QuasiPeriodicSignal> y_pc;
  y_pc.reserve(y.size());
  for (int i = 0; i < cfg.n_r; ++i) {
    y_pc.push_back(cancel_pilot(y[static_cast<std::size_t>(i)], row(st.taps, i, cfg.n_t), pilots, cfg.pilot_energy,
                                cfg.n_t));
  }
  const BlockChannelMatrix H(g, cfg.n_r, cfg.n_t, st.taps);
  Detection det = detect(H, y_pc, cfg.detection());
  st.symbols = std::move(det.symbols);
  st.las_budget_exhausted = det.las.budget_exhausted;
  return st;
}

}  // namespace

EstimatorState turbo_initial(std::span<const QuasiPeriodicSignal> y, std::span<const QuasiPeriodicSignal> pilots,
                             const EstimatorConfig& cfg) {
  check_inputs(y, pilots, cfg);
  const DDGrid& g = y.front().grid();
  const double thr = readoff_threshold(g, cfg.n_t, cfg.data_snr(g), cfg.pilot_snr(g));
  return estimate_and_detect(0, y, y, pilots, std::vector<double>(static_cast<std::size_t>(cfg.n_r), thr), cfg);
}

EstimatorState turbo_step(const EstimatorState& prev, std::span<const QuasiPeriodicSignal> y,
                          std::span<const QuasiPeriodicSignal> pilots, const EstimatorConfig& cfg) {
  check_inputs(y, pilots, cfg);
  if (prev.taps.size() != static_cast<std::size_t>(cfg.n_r * cfg.n_t) ||
      prev.symbols.size() != static_cast<std::size_t>(cfg.n_t)) {
    throw DomainError("turbo_step: previous state does not match the antenna configuration");
  }
  const DDGrid& g = y.front().grid();
  const double mn = static_cast<double>(g.size());
  const double rho_p = cfg.pilot_snr(g);
  const double initial = readoff_threshold(g, cfg.n_t, cfg.data_snr(g), rho_p);

  std::vector<QuasiPeriodicSignal> y_dc;
  std::vector<double> thresholds;
  for (int i = 0; i < cfg.n_r; ++i) {
    const auto taps_i = row(prev.taps, i, cfg.n_t);
    y_dc.push_back(cancel_data(y[static_cast<std::size_t>(i)], taps_i, prev.symbols, cfg.data_energy, cfg.n_t));
    if (cfg.residual_threshold) {
      const QuasiPeriodicSignal e = cancel_pilot(y_dc.back(), taps_i, pilots, cfg.pilot_energy, cfg.n_t);
      const double rho_res = std::max(e.energy() / (mn * cfg.noise_variance) - 1.0, 0.0);
      thresholds.push_back(readoff_threshold(g, cfg.n_t, rho_res, rho_p));
    } else {
      thresholds.push_back(initial);
    }
  }
  return estimate_and_detect(prev.iteration + 1, y, y_dc, pilots, std::move(thresholds), cfg);
}

TurboResult turbo_loop(std::span<const QuasiPeriodicSignal> y, std::span<const QuasiPeriodicSignal> pilots,
                       const EstimatorConfig& cfg, int n_itr, std::optional<TurboTruth> truth) {
  if (n_itr < 0) throw ConfigError("turbo_loop: n_itr must be >= 0");
  TurboResult res;
  EstimatorState st = turbo_initial(y, pilots, cfg);
  const LagBox box = channel_support_box(y.front().grid());
  auto record = [&](const EstimatorState& s) {
    if (!truth) return;
    IterationMetrics m;
    m.iteration = s.iteration;
    m.nmse_linear = nmse_linear(s.taps, truth->taps, box);
    m.nmse_db = to_db_floored(m.nmse_linear);
    m.bit_errors = count_bit_errors(s.symbols, truth->symbols);
    for (const RMatrix& s : truth->symbols) m.bits += s.size();
    res.metrics.push_back(m);
  };
  record(st);
  for (int t = 1; t <= n_itr; ++t) {
    st = turbo_step(st, y, pilots, cfg);
    record(st);
  }
  res.final_state = std::move(st);
  return res;
}

double nmse_linear(std::span<const DDTaps> estimate, std::span<const DDTaps> truth, const LagBox& support) {
  if (estimate.size() != truth.size()) throw DomainError("nmse: estimate and truth link counts differ");
  double err = 0.0;
  double ref = 0.0;
  for (std::size_t n = 0; n < truth.size(); ++n) {
    std::map<Lag, Complex> diff;
    for (const Tap& t : truth[n].taps()) {
      if (!support.contains(t.lag)) continue;
      ref += std::norm(t.value);
      diff[t.lag] -= t.value;
    }
    for (const Tap& t : estimate[n].taps()) {
      if (support.contains(t.lag)) diff[t.lag] += t.value;
    }
    for (const auto& [lag, d] : diff) err += std::norm(d);
  }
  if (!(ref > 0.0)) throw DomainError("nmse: true channel has no energy on the support");
  return err / ref;
}

double to_db_floored(double linear) {
  if (!(linear > 0.0)) return kNmseFloorDb;
  return std::max(10.0 * std::log10(linear), kNmseFloorDb);
}

double nmse_db(std::span<const DDTaps> estimate, std::span<const DDTaps> truth, const LagBox& support) {
  return to_db_floored(nmse_linear(estimate, truth, support));
}

long long count_bit_errors(std::span<const RMatrix> detected, std::span<const RMatrix> truth) {
  if (detected.size() != truth.size()) throw DomainError("count_bit_errors: antenna counts differ");
  long long errors = 0;
  for (std::size_t j = 0; j < truth.size(); ++j) {
    if (detected[j].rows() != truth[j].rows() || detected[j].cols() != truth[j].cols()) {
      throw DomainError("count_bit_errors: symbol block shapes differ");
    }
    errors += ((detected[j].array() > 0.0) != (truth[j].array() > 0.0)).count();
  }
  return errors;
}

}  // namespace zotfs

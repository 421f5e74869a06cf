// SPDX-License-Identifier: Apache-2.0
//
// Read-off channel estimation from the cross-ambiguity with each spread pilot,
// pilot/data cancellation and the turbo estimation-detection loop.

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "zotfs/detector.hpp"
#include "zotfs/region.hpp"
#include "zotfs/signals.hpp"

namespace zotfs {

struct EstimatorConfig {
  double data_energy = 1.0;      // E_d
  double pilot_energy = 1.0;     // E_p
  double noise_variance = 1e-2;  // N_0 per DD sample
  int n_t = 1;
  int n_r = 1;
  ReadoffRegion region{};
  /// After the first iteration, replace rho_d in the threshold by the power of
  /// the residual left once data and pilots are cancelled. Off: the initial
  /// threshold is reused at every iteration.
  bool residual_threshold = true;
  int max_las_steps = 100000;

  double data_snr(const DDGrid& grid) const { return data_energy / (static_cast<double>(grid.size()) * noise_variance); }
  double pilot_snr(const DDGrid& grid) const { return pilot_energy / (static_cast<double>(grid.size()) * noise_variance); }
  DetectionConfig detection() const;
  void validate() const;
};

/// 3 sqrt((n_t / MN) (1 + rho_d) / rho_p): three standard deviations of the
/// read-off error sqrt(n_t / E_p) (A_data + A_noise) when every link has unit
/// energy. Equals the single-antenna rule for n_t = 1.
double readoff_threshold(const DDGrid& grid, int n_t, double rho_d, double rho_p);

/// h[k, l] = sqrt(n_t / E_p) A_{y, x_s}[k, l] on the region, kept where |h| > threshold.
/// Throws ConfigError when E_p <= 0.
DDTaps estimate_readoff(const QuasiPeriodicSignal& y, const QuasiPeriodicSignal& pilot, double pilot_energy, int n_t,
                        const ReadoffRegion& region, double threshold);

/// y - sum_j h_j *sd (sqrt(E_p / n_t) x_s,j).
QuasiPeriodicSignal cancel_pilot(const QuasiPeriodicSignal& y, std::span<const DDTaps> taps,
                                 std::span<const QuasiPeriodicSignal> pilots, double pilot_energy, int n_t);

/// y - sum_j h_j *sd (sqrt(E_d / n_t) x_d,j) with x_d,j rebuilt from hard symbols.
QuasiPeriodicSignal cancel_data(const QuasiPeriodicSignal& y, std::span<const DDTaps> taps,
                                std::span<const RMatrix> symbols, double data_energy, int n_t);

/// Estimates and detections after one turbo iteration. Taps are stored at [i * n_t + j].
struct EstimatorState {
  int iteration = 0;
  std::vector<DDTaps> taps;
  std::vector<RMatrix> symbols;
  std::vector<double> thresholds;  // per receive antenna
  bool las_budget_exhausted = false;
};

/// Known transmitted quantities used only for reporting.
struct TurboTruth {
  std::span<const DDTaps> taps;
  std::span<const RMatrix> symbols;
};

struct IterationMetrics {
  int iteration = 0;
  double nmse_db = 0.0;
  double nmse_linear = 0.0;
  long long bit_errors = 0;
  long long bits = 0;
};

struct TurboResult {
  EstimatorState final_state;
  std::vector<IterationMetrics> metrics;
};

/// Iteration 0: read-off with the initial threshold, pilot cancellation, detection.
EstimatorState turbo_initial(std::span<const QuasiPeriodicSignal> y, std::span<const QuasiPeriodicSignal> pilots,
                             const EstimatorConfig& cfg);

/// Iteration t >= 1: cancel data with prev, re-estimate, cancel pilots, detect.
EstimatorState turbo_step(const EstimatorState& prev, std::span<const QuasiPeriodicSignal> y,
                          std::span<const QuasiPeriodicSignal> pilots, const EstimatorConfig& cfg);

/// turbo_initial followed by n_itr turbo steps; metrics are filled when truth is given.
TurboResult turbo_loop(std::span<const QuasiPeriodicSignal> y, std::span<const QuasiPeriodicSignal> pilots,
                       const EstimatorConfig& cfg, int n_itr, std::optional<TurboTruth> truth = std::nullopt);

/// sum |h_est - h_true|^2 / sum |h_true|^2 over all links and lags in `support`.
/// Throws DomainError when the truth has no energy there.
double nmse_linear(std::span<const DDTaps> estimate, std::span<const DDTaps> truth, const LagBox& support);

/// 10 log10 of nmse_linear, floored at kNmseFloorDb.
double nmse_db(std::span<const DDTaps> estimate, std::span<const DDTaps> truth, const LagBox& support);

inline constexpr double kNmseFloorDb = -300.0;

double to_db_floored(double linear);

long long count_bit_errors(std::span<const RMatrix> detected, std::span<const RMatrix> truth);

}  // namespace zotfs

// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo link simulation: configuration, frame synthesis, sweeps and result files.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "zotfs/channel.hpp"
#include "zotfs/estimator.hpp"
#include "zotfs/pilot.hpp"
#include "zotfs/pulse_shaping.hpp"

namespace zotfs {

struct SweepSpec {
  std::vector<double> snr_db{15.0};
  std::vector<double> pdr_db{5.0};
  int iterations = 4;
  int frames = 100;
};

struct SimConfig {
  int M = 31;
  int N = 37;
  double doppler_period_hz = 30e3;
  int n_t = 1;
  int n_r = 1;
  std::vector<SpreadPilotConfig> pilots{{0, 0, 1}};
  double alpha_tau = 0.044;
  double alpha_nu = 0.044;
  double omega_tau = 1.0278;
  double omega_nu = 1.0278;
  QuadratureSpec quadrature{};
  VehAProfile channel{};
  int readoff_half_delay = 8;
  int readoff_half_doppler = 10;
  /// True taps are synthesized on the read-off region dilated by this many bins.
  int truth_margin = 4;
  bool residual_threshold = true;
  bool perfect_csi = true;
  int max_las_steps = 100000;
  double data_energy = 1.0;
  SweepSpec sweep{};
  std::uint64_t seed = 1;
  int threads = 0;
  std::string csv_path = "results.csv";
  std::string json_path;  // empty: csv_path with a .json extension

  DDGrid grid() const { return {M, N, doppler_period_hz}; }
  GaussianSincFilter filter() const;
  ReadoffRegion region() const { return {readoff_half_delay, readoff_half_doppler}; }
  /// Throws ConfigError on any inconsistency.
  void validate() const;
};

/// Parse a YAML document; unknown keys are rejected.
SimConfig parse_config(const std::string& yaml_text);
/// Throws ConfigError naming the path when the file is missing or malformed.
SimConfig load_config(const std::filesystem::path& path);
/// Config echo as a JSON string.
std::string config_to_json(const SimConfig& cfg);

/// Counter-based per-frame seed (splitmix64 over base, point and frame index).
std::uint64_t frame_seed(std::uint64_t base, std::uint64_t point, std::uint64_t frame);

/// Module error annotated with the seed of the frame that raised it.
class FrameError : public std::runtime_error {
 public:
  FrameError(std::uint64_t seed, const std::string& what)
      : std::runtime_error("frame seed " + std::to_string(seed) + ": " + what), seed_(seed) {}
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

/// One synthesized frame; every vector of taps is indexed [i * n_t + j].
struct Frame {
  std::vector<DDTaps> truth;
  std::vector<RMatrix> symbols;
  std::vector<QuasiPeriodicSignal> received;
  double pilot_energy = 0.0;  // sum_j ||sqrt(E_p / n_t) x_s,j||^2
  double data_energy = 0.0;   // sum_j ||sqrt(E_d / n_t) x_d,j||^2
  double noise_variance = 0.0;
};

struct TrialRecord {
  std::uint64_t seed = 0;
  double snr_db = 0.0;
  double pdr_db = 0.0;
  int iteration = 0;  // -1 for the perfect-CSI detection
  double nmse_db = 0.0;
  double nmse_linear = 0.0;
  long long bit_errors = 0;
  long long bits = 0;
  double wall_ms = 0.0;
};

struct FrameResult {
  std::uint64_t seed = 0;
  std::vector<TrialRecord> records;
  double pilot_energy = 0.0;
  double data_energy = 0.0;
  bool las_budget_exhausted = false;
};

/// Holds the per-configuration constants (grid, filter, pilots, supports) shared by all frames.
class Simulator {
 public:
  explicit Simulator(SimConfig cfg);

  const SimConfig& config() const { return cfg_; }
  const DDGrid& grid() const { return grid_; }
  const std::vector<QuasiPeriodicSignal>& pilots() const { return pilots_; }
  const std::vector<Lag>& truth_support() const { return truth_support_; }

  /// Energies and noise level at a sweep point.
  EstimatorConfig estimator_config(double snr_db, double pdr_db) const;

  /// Draw channels, data and noise, and synthesize y_i = sum_j h_ij *sd x_j + n_i.
  Frame synthesize_frame(double snr_db, double pdr_db, Rng& rng) const;

  /// Turbo loop plus the paired perfect-CSI detection on the same realization.
  FrameResult run_frame(double snr_db, double pdr_db, std::uint64_t seed) const;

 private:
  SimConfig cfg_;
  DDGrid grid_;
  GaussianSincFilter filter_;
  std::vector<QuasiPeriodicSignal> pilots_;
  std::vector<Lag> truth_support_;
};

struct SweepRow {
  double snr_db = 0.0;
  double pdr_db = 0.0;
  int iteration = 0;
  double nmse_db = 0.0;  // NaN for the perfect-CSI row
  double ber = 0.0;
  int frames = 0;
  double wall_ms = 0.0;  // mean per frame
  long long bit_errors = 0;
  long long bits = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  bool interrupted = false;
  int frames_completed = 0;
  int frames_requested = 0;
};

/// Threads used by run_sweep: ZOTFS_THREADS if set, else cfg.threads, else hardware concurrency.
int resolve_threads(const SimConfig& cfg);

/// Runs every sweep point; frames are distributed over a worker pool. Stops
/// early, keeping completed frames, when stop_requested() becomes true.
SweepResult run_sweep(const SimConfig& cfg, const std::function<void(int done, int total)>& progress = {});

/// Aggregate frame results of one sweep point into one row per iteration plus the perfect-CSI row.
std::vector<SweepRow> aggregate(double snr_db, double pdr_db, const std::vector<FrameResult>& frames);

inline constexpr const char* kCsvHeader = "snr_db,pdr_db,iter,nmse_db,ber,frames,wall_ms";

void write_csv(const SweepResult& result, const std::filesystem::path& path);
void write_json(const SweepResult& result, const SimConfig& cfg, const std::filesystem::path& path);

/// Provenance string baked in at build time.
const char* build_provenance();

void install_interrupt_handler();
void request_stop();
void clear_stop();
bool stop_requested();

}  // namespace zotfs

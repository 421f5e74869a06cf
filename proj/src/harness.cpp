// SPDX-License-Identifier: Apache-2.0

#include "zotfs/harness.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "zotfs/twisted_conv.hpp"

#ifndef ZOTFS_GIT_DESCRIBE
#define ZOTFS_GIT_DESCRIBE "unknown"
#endif

namespace zotfs {

GaussianSincFilter SimConfig::filter() const {
  GaussianSincFilter f = GaussianSincFilter::for_grid(grid());
  f.alpha_tau = alpha_tau;
  f.alpha_nu = alpha_nu;
  f.omega_tau = omega_tau;
  f.omega_nu = omega_nu;
  return f;
}

void SimConfig::validate() const {
  if (M < 1 || N < 1) throw ConfigError("config: grid.M and grid.N must be >= 1");
  if (!(doppler_period_hz > 0.0)) throw ConfigError("config: grid.doppler_period_hz must be > 0");
  if (n_t < 1 || n_r < 1) throw ConfigError("config: antennas.n_t and antennas.n_r must be >= 1");
  if (pilots.size() < static_cast<std::size_t>(n_t)) {
    throw ConfigError("config: " + std::to_string(n_t) + " transmit antennas need as many pilots, got " +
                      std::to_string(pilots.size()));
  }
  for (const SpreadPilotConfig& p : pilots) {
    if (p.k_p < 0 || p.k_p >= M || p.l_p < 0 || p.l_p >= N) {
      throw ConfigError("config: pilot location outside the fundamental domain");
    }
  }
  if (readoff_half_delay < 1 || readoff_half_doppler < 1) {
    throw ConfigError("config: read-off half-diagonals must be >= 1");
  }
  if (truth_margin < 0) throw ConfigError("config: estimator.truth_margin must be >= 0");
  if (readoff_half_delay + truth_margin > 2 * M - 1 || readoff_half_doppler + truth_margin > 2 * N - 1) {
    throw ConfigError("config: read-off region plus truth margin exceeds the channel support box");
  }
  if (!(data_energy > 0.0)) throw ConfigError("config: data_energy must be > 0");
  if (max_las_steps < 0) throw ConfigError("config: detector.max_las_steps must be >= 0");
  if (sweep.snr_db.empty() || sweep.pdr_db.empty()) throw ConfigError("config: sweep axes must not be empty");
  if (sweep.iterations < 0) throw ConfigError("config: sweep.iterations must be >= 0");
  if (sweep.frames < 1) throw ConfigError("config: sweep.frames must be >= 1");
  if (threads < 0) throw ConfigError("config: threads must be >= 0");
  if (!(quadrature.step_bins > 0.0) || !(quadrature.half_width_delay_bins > 0.0) ||
      !(quadrature.half_width_doppler_bins > 0.0)) {
    throw ConfigError("config: quadrature step and half-widths must be > 0");
  }
  channel.validate();
  (void)grid();
}

namespace {

void reject_unknown(const YAML::Node& node, const std::string& where, std::initializer_list<const char*> keys) {
  if (!node.IsMap()) throw ConfigError("config: '" + where + "' must be a mapping");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.contains(key)) throw ConfigError("config: unknown key '" + key + "' in '" + where + "'");
  }
}

template <typename T>
void read(const YAML::Node& node, const char* key, T& out) {
  if (const YAML::Node v = node[key]) out = v.as<T>();
}

}  // namespace

SimConfig parse_config(const std::string& yaml_text) {
  SimConfig cfg;
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (root.IsNull()) return cfg;
  try {
    reject_unknown(root, "<root>",
                   {"grid", "antennas", "pilots", "filter", "quadrature", "channel", "estimator", "detector", "sweep",
                    "data_energy", "seed", "threads", "output"});
    if (const auto g = root["grid"]) {
      reject_unknown(g, "grid", {"M", "N", "doppler_period_hz"});
      read(g, "M", cfg.M);
      read(g, "N", cfg.N);
      read(g, "doppler_period_hz", cfg.doppler_period_hz);
    }
    if (const auto a = root["antennas"]) {
      reject_unknown(a, "antennas", {"n_t", "n_r"});
      read(a, "n_t", cfg.n_t);
      read(a, "n_r", cfg.n_r);
    }
    if (const auto p = root["pilots"]) {
      if (!p.IsSequence()) throw ConfigError("config: 'pilots' must be a list");
      cfg.pilots.clear();
      for (const auto& e : p) {
        reject_unknown(e, "pilots[]", {"k_p", "l_p", "q"});
        SpreadPilotConfig pc;
        read(e, "k_p", pc.k_p);
        read(e, "l_p", pc.l_p);
        read(e, "q", pc.q);
        cfg.pilots.push_back(pc);
      }
    }
    if (const auto f = root["filter"]) {
      reject_unknown(f, "filter", {"alpha_tau", "alpha_nu", "omega_tau", "omega_nu"});
      read(f, "alpha_tau", cfg.alpha_tau);
      read(f, "alpha_nu", cfg.alpha_nu);
      read(f, "omega_tau", cfg.omega_tau);
      read(f, "omega_nu", cfg.omega_nu);
    }
    if (const auto q = root["quadrature"]) {
      reject_unknown(q, "quadrature",
                     {"half_width_delay_bins", "half_width_doppler_bins", "step_bins", "check_convergence"});
      read(q, "half_width_delay_bins", cfg.quadrature.half_width_delay_bins);
      read(q, "half_width_doppler_bins", cfg.quadrature.half_width_doppler_bins);
      read(q, "step_bins", cfg.quadrature.step_bins);
      read(q, "check_convergence", cfg.quadrature.check_convergence);
    }
    if (const auto c = root["channel"]) {
      reject_unknown(c, "channel", {"delays_us", "powers_db", "nu_max_hz"});
      read(c, "delays_us", cfg.channel.delays_us);
      read(c, "powers_db", cfg.channel.powers_db);
      read(c, "nu_max_hz", cfg.channel.nu_max_hz);
    }
    if (const auto e = root["estimator"]) {
      reject_unknown(e, "estimator", {"readoff_half_delay", "readoff_half_doppler", "truth_margin", "residual_threshold"});
      read(e, "readoff_half_delay", cfg.readoff_half_delay);
      read(e, "readoff_half_doppler", cfg.readoff_half_doppler);
      read(e, "truth_margin", cfg.truth_margin);
      read(e, "residual_threshold", cfg.residual_threshold);
    }
    if (const auto d = root["detector"]) {
      reject_unknown(d, "detector", {"max_las_steps", "perfect_csi"});
      read(d, "max_las_steps", cfg.max_las_steps);
      read(d, "perfect_csi", cfg.perfect_csi);
    }
    if (const auto s = root["sweep"]) {
      reject_unknown(s, "sweep", {"snr_db", "pdr_db", "iterations", "frames"});
      read(s, "snr_db", cfg.sweep.snr_db);
      read(s, "pdr_db", cfg.sweep.pdr_db);
      read(s, "iterations", cfg.sweep.iterations);
      read(s, "frames", cfg.sweep.frames);
    }
    read(root, "data_energy", cfg.data_energy);
    read(root, "seed", cfg.seed);
    read(root, "threads", cfg.threads);
    if (const auto o = root["output"]) {
      reject_unknown(o, "output", {"csv", "json"});
      read(o, "csv", cfg.csv_path);
      read(o, "json", cfg.json_path);
    }
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

namespace {

nlohmann::json config_json(const SimConfig& c) {
  nlohmann::json pilots = nlohmann::json::array();
  for (const auto& p : c.pilots) pilots.push_back({{"k_p", p.k_p}, {"l_p", p.l_p}, {"q", p.q}});
  return {
      {"grid", {{"M", c.M}, {"N", c.N}, {"doppler_period_hz", c.doppler_period_hz}}},
      {"antennas", {{"n_t", c.n_t}, {"n_r", c.n_r}}},
      {"pilots", pilots},
      {"filter",
       {{"alpha_tau", c.alpha_tau}, {"alpha_nu", c.alpha_nu}, {"omega_tau", c.omega_tau}, {"omega_nu", c.omega_nu}}},
      {"quadrature",
       {{"half_width_delay_bins", c.quadrature.half_width_delay_bins},
        {"half_width_doppler_bins", c.quadrature.half_width_doppler_bins},
        {"step_bins", c.quadrature.step_bins},
        {"check_convergence", c.quadrature.check_convergence}}},
      {"channel",
       {{"delays_us", c.channel.delays_us}, {"powers_db", c.channel.powers_db}, {"nu_max_hz", c.channel.nu_max_hz}}},
      {"estimator",
       {{"readoff_half_delay", c.readoff_half_delay},
        {"readoff_half_doppler", c.readoff_half_doppler},
        {"truth_margin", c.truth_margin},
        {"residual_threshold", c.residual_threshold}}},
      {"detector", {{"max_las_steps", c.max_las_steps}, {"perfect_csi", c.perfect_csi}}},
      {"sweep",
       {{"snr_db", c.sweep.snr_db},
        {"pdr_db", c.sweep.pdr_db},
        {"iterations", c.sweep.iterations},
        {"frames", c.sweep.frames}}},
      {"data_energy", c.data_energy},
      {"seed", c.seed},
      {"threads", c.threads},
      {"output", {{"csv", c.csv_path}, {"json", c.json_path}}},
  };
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::atomic<bool> g_stop{false};

extern "C" void on_sigint(int) { g_stop.store(true); }

}  // namespace

std::string config_to_json(const SimConfig& cfg) { return config_json(cfg).dump(2); }

std::uint64_t frame_seed(std::uint64_t base, std::uint64_t point, std::uint64_t frame) {
  return splitmix64(splitmix64(splitmix64(base) ^ point) ^ frame);
}

Simulator::Simulator(SimConfig cfg) : cfg_(std::move(cfg)), grid_(cfg_.grid()), filter_(cfg_.filter()) {
  cfg_.validate();
  for (int j = 0; j < cfg_.n_t; ++j) pilots_.push_back(build_spread_pilot(cfg_.pilots[static_cast<std::size_t>(j)], grid_));
  truth_support_ = dilate(cfg_.region().lags(), cfg_.truth_margin);
}

EstimatorConfig Simulator::estimator_config(double snr_db, double pdr_db) const {
  EstimatorConfig ec;
  ec.data_energy = cfg_.data_energy;
  ec.pilot_energy = db_to_linear(pdr_db) * cfg_.data_energy;
  ec.noise_variance = cfg_.data_energy / (static_cast<double>(grid_.size()) * db_to_linear(snr_db));
  ec.n_t = cfg_.n_t;
  ec.n_r = cfg_.n_r;
  ec.region = cfg_.region();
  ec.residual_threshold = cfg_.residual_threshold;
  ec.max_las_steps = cfg_.max_las_steps;
  return ec;
}

Frame Simulator::synthesize_frame(double snr_db, double pdr_db, Rng& rng) const {
  const EstimatorConfig ec = estimator_config(snr_db, pdr_db);
  const int M = grid_.M();
  const int N = grid_.N();
  Frame f;
  f.noise_variance = ec.noise_variance;

  const std::vector<ChannelRealization> channels = sample_veh_a_mimo(cfg_.channel, cfg_.n_r, cfg_.n_t, rng);
  for (const ChannelRealization& ch : channels) {
    f.truth.push_back(effective_channel_taps(ch, filter_, grid_, truth_support_, cfg_.quadrature));
  }

  std::bernoulli_distribution bit(0.5);
  const double a_d = std::sqrt(ec.data_energy / cfg_.n_t);
  const double a_p = std::sqrt(ec.pilot_energy / cfg_.n_t);
  std::vector<QuasiPeriodicSignal> tx;
  for (int j = 0; j < cfg_.n_t; ++j) {
    RMatrix s(M, N);
    for (int k = 0; k < M; ++k) {
      for (int l = 0; l < N; ++l) s(k, l) = bit(rng) ? 1.0 : -1.0;
    }
    const QuasiPeriodicSignal xd = place_data_symbols(s.cast<Complex>(), grid_) * a_d;
    const QuasiPeriodicSignal xp = pilots_[static_cast<std::size_t>(j)] * a_p;
    f.data_energy += xd.energy();
    f.pilot_energy += xp.energy();
    tx.push_back(xd + xp);
    f.symbols.push_back(std::move(s));
  }

  std::normal_distribution<double> gauss(0.0, std::sqrt(ec.noise_variance / 2.0));
  for (int i = 0; i < cfg_.n_r; ++i) {
    CMatrix noise(M, N);
    for (int k = 0; k < M; ++k) {
      for (int l = 0; l < N; ++l) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        noise(k, l) = {re, im};
      }
    }
    QuasiPeriodicSignal y(grid_, std::move(noise));
    for (int j = 0; j < cfg_.n_t; ++j) {
      y = y + twisted_conv(f.truth[static_cast<std::size_t>(i * cfg_.n_t + j)], tx[static_cast<std::size_t>(j)]);
    }
    f.received.push_back(std::move(y));
  }
  return f;
}

FrameResult Simulator::run_frame(double snr_db, double pdr_db, std::uint64_t seed) const {
  try {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(seed);
    const Frame f = synthesize_frame(snr_db, pdr_db, rng);
    const EstimatorConfig ec = estimator_config(snr_db, pdr_db);
    const TurboResult tr = turbo_loop(f.received, pilots_, ec, cfg_.sweep.iterations, TurboTruth{f.truth, f.symbols});

    FrameResult out;
    out.seed = seed;
    out.pilot_energy = f.pilot_energy;
    out.data_energy = f.data_energy;
    out.las_budget_exhausted = tr.final_state.las_budget_exhausted;
    for (const IterationMetrics& m : tr.metrics) {
      out.records.push_back({seed, snr_db, pdr_db, m.iteration, m.nmse_db, m.nmse_linear, m.bit_errors, m.bits, 0.0});
    }
    if (cfg_.perfect_csi) {
      std::vector<QuasiPeriodicSignal> y_pc;
      for (int i = 0; i < cfg_.n_r; ++i) {
        const auto row = std::span<const DDTaps>(f.truth).subspan(static_cast<std::size_t>(i * cfg_.n_t),
                                                                   static_cast<std::size_t>(cfg_.n_t));
        y_pc.push_back(cancel_pilot(f.received[static_cast<std::size_t>(i)], row, pilots_, ec.pilot_energy, cfg_.n_t));
      }
      const BlockChannelMatrix H(grid_, cfg_.n_r, cfg_.n_t, f.truth);
      const Detection det = detect(H, y_pc, ec.detection());
      TrialRecord r{seed, snr_db, pdr_db, -1, std::numeric_limits<double>::quiet_NaN(),
                    std::numeric_limits<double>::quiet_NaN(), count_bit_errors(det.symbols, f.symbols), 0, 0.0};
      for (const RMatrix& s : f.symbols) r.bits += s.size();
      out.records.push_back(r);
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    for (TrialRecord& r : out.records) r.wall_ms = ms;
    return out;
  } catch (const FrameError&) {
    throw;
  } catch (const std::exception& e) {
    throw FrameError(seed, e.what());
  }
}

std::vector<SweepRow> aggregate(double snr_db, double pdr_db, const std::vector<FrameResult>& frames) {
  std::map<int, SweepRow> rows;
  std::map<int, double> nmse_sum;
  for (const FrameResult& f : frames) {
    for (const TrialRecord& r : f.records) {
      SweepRow& row = rows[r.iteration];
      row.snr_db = snr_db;
      row.pdr_db = pdr_db;
      row.iteration = r.iteration;
      row.frames += 1;
      row.bit_errors += r.bit_errors;
      row.bits += r.bits;
      row.wall_ms += r.wall_ms;
      nmse_sum[r.iteration] += r.nmse_linear;
    }
  }
  std::vector<SweepRow> out;
  for (auto& [it, row] : rows) {
    row.ber = row.bits > 0 ? static_cast<double>(row.bit_errors) / static_cast<double>(row.bits) : 0.0;
    row.wall_ms /= row.frames;
    row.nmse_db = it < 0 ? std::numeric_limits<double>::quiet_NaN() : to_db_floored(nmse_sum[it] / row.frames);
    out.push_back(row);
  }
  // iterations in order, perfect CSI last
  std::stable_partition(out.begin(), out.end(), [](const SweepRow& r) { return r.iteration >= 0; });
  return out;
}

int resolve_threads(const SimConfig& cfg) {
  if (const char* env = std::getenv("ZOTFS_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (const std::exception&) {
    }
    throw ConfigError(std::string("ZOTFS_THREADS must be a positive integer, got '") + env + "'");
  }
  if (cfg.threads > 0) return cfg.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

SweepResult run_sweep(const SimConfig& cfg, const std::function<void(int, int)>& progress) {
  const Simulator sim(cfg);
  struct Point {
    double snr_db;
    double pdr_db;
  };
  std::vector<Point> points;
  for (double pdr : cfg.sweep.pdr_db) {
    for (double snr : cfg.sweep.snr_db) points.push_back({snr, pdr});
  }
  const int frames = cfg.sweep.frames;
  const int total = static_cast<int>(points.size()) * frames;
  std::vector<std::optional<FrameResult>> results(static_cast<std::size_t>(total));

  std::atomic<int> next{0};
  std::atomic<int> done{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex mu;

  auto worker = [&] {
    for (;;) {
      if (stop_requested() || failed.load()) return;
      const int idx = next.fetch_add(1);
      if (idx >= total) return;
      const auto p = static_cast<std::size_t>(idx / frames);
      const auto f = static_cast<std::uint64_t>(idx % frames);
      try {
        FrameResult r = sim.run_frame(points[p].snr_db, points[p].pdr_db, frame_seed(cfg.seed, p, f));
        results[static_cast<std::size_t>(idx)] = std::move(r);
      } catch (...) {
        const std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
        failed.store(true);
        return;
      }
      const int d = done.fetch_add(1) + 1;
      if (progress) {
        const std::lock_guard lock(mu);
        progress(d, total);
      }
    }
  };

  const int n_threads = std::min(resolve_threads(cfg), std::max(total, 1));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  SweepResult out;
  out.frames_requested = total;
  out.frames_completed = done.load();
  out.interrupted = out.frames_completed < total;
  for (std::size_t p = 0; p < points.size(); ++p) {
    std::vector<FrameResult> fr;
    for (int f = 0; f < frames; ++f) {
      auto& r = results[p * static_cast<std::size_t>(frames) + static_cast<std::size_t>(f)];
      if (r) fr.push_back(std::move(*r));
    }
    if (fr.empty()) continue;
    for (SweepRow& row : aggregate(points[p].snr_db, points[p].pdr_db, fr)) out.rows.push_back(row);
  }
  return out;
}

void write_csv(const SweepResult& result, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path.string());
  os << kCsvHeader << '\n' << std::setprecision(10);
  for (const SweepRow& r : result.rows) {
    os << r.snr_db << ',' << r.pdr_db << ',' << r.iteration << ',';
    if (std::isnan(r.nmse_db)) {
      os << "nan";
    } else {
      os << r.nmse_db;
    }
    os << ',' << r.ber << ',' << r.frames << ',' << r.wall_ms << '\n';
  }
}

void write_json(const SweepResult& result, const SimConfig& cfg, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  nlohmann::json rows = nlohmann::json::array();
  for (const SweepRow& r : result.rows) {
    rows.push_back({{"snr_db", r.snr_db},
                    {"pdr_db", r.pdr_db},
                    {"iter", r.iteration},
                    {"nmse_db", std::isnan(r.nmse_db) ? nlohmann::json(nullptr) : nlohmann::json(r.nmse_db)},
                    {"ber", r.ber},
                    {"frames", r.frames},
                    {"wall_ms", r.wall_ms},
                    {"bit_errors", r.bit_errors},
                    {"bits", r.bits}});
  }
  const nlohmann::json doc = {{"schema_version", 1},
                              {"provenance", build_provenance()},
                              {"interrupted", result.interrupted},
                              {"frames_completed", result.frames_completed},
                              {"frames_requested", result.frames_requested},
                              {"config", config_json(cfg)},
                              {"rows", rows}};
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path.string());
  os << doc.dump(2) << '\n';
}

const char* build_provenance() { return "zotfs " ZOTFS_GIT_DESCRIBE; }

void install_interrupt_handler() { std::signal(SIGINT, on_sigint); }
void request_stop() { g_stop.store(true); }
void clear_stop() { g_stop.store(false); }
bool stop_requested() { return g_stop.load(); }

}  // namespace zotfs

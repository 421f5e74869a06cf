// SPDX-License-Identifier: Apache-2.0
//
// zotfs command line: simulate, validate-pilots, verify-theorem, ambiguity-map, taps.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "zotfs/ambiguity.hpp"
#include "zotfs/harness.hpp"
#include "zotfs/twisted_conv.hpp"

namespace {

using namespace zotfs;

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

SpreadPilotConfig parse_pilot(const std::string& text) {
  SpreadPilotConfig p;
  char c1 = 0, c2 = 0;
  std::istringstream is(text);
  if (!(is >> p.k_p >> c1 >> p.l_p >> c2 >> p.q) || c1 != ',' || c2 != ',') {
    throw ConfigError("pilot must be given as k,l,q (got '" + text + "')");
  }
  return p;
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw ConfigError("cannot write " + path);
  return file;
}

struct SimulateArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<int> frames;
  std::optional<int> threads;
  bool quiet = false;
};

int cmd_simulate(const SimulateArgs& a) {
  SimConfig cfg = load_config(a.config);
  if (a.seed) cfg.seed = *a.seed;
  if (a.frames) cfg.sweep.frames = *a.frames;
  if (a.threads) cfg.threads = *a.threads;
  if (!a.out.empty()) {
    cfg.csv_path = a.out;
    cfg.json_path.clear();
  }
  cfg.validate();
  std::filesystem::path json = cfg.json_path;
  if (json.empty()) json = std::filesystem::path(cfg.csv_path).replace_extension(".json");

  install_interrupt_handler();
  const SweepResult res = run_sweep(cfg, [&](int done, int total) {
    if (!a.quiet) std::fprintf(stderr, "\rframes %d/%d", done, total);
  });
  if (!a.quiet) std::fprintf(stderr, "\n");
  write_csv(res, cfg.csv_path);
  write_json(res, cfg, json);
  std::cout << kCsvHeader << '\n';
  for (const SweepRow& r : res.rows) {
    std::cout << r.snr_db << ',' << r.pdr_db << ',' << r.iteration << ',' << r.nmse_db << ',' << r.ber << ','
              << r.frames << ',' << r.wall_ms << '\n';
  }
  if (res.interrupted) {
    std::cerr << "interrupted after " << res.frames_completed << " of " << res.frames_requested
              << " frames; partial results written\n";
    return 130;
  }
  return 0;
}

struct PilotArgs {
  std::string config;
  int M = 31;
  int N = 37;
  std::vector<std::string> pilots;
  int margin = 4;
  int half_delay = 8;
  int half_doppler = 10;
};

int cmd_validate(const PilotArgs& a) {
  int M = a.M, N = a.N, hd = a.half_delay, hl = a.half_doppler;
  std::vector<SpreadPilotConfig> pilots;
  if (!a.config.empty()) {
    const SimConfig cfg = load_config(a.config);
    M = cfg.M;
    N = cfg.N;
    hd = cfg.readoff_half_delay;
    hl = cfg.readoff_half_doppler;
    pilots.assign(cfg.pilots.begin(), cfg.pilots.begin() + cfg.n_t);
  }
  for (const auto& s : a.pilots) pilots.push_back(parse_pilot(s));
  if (pilots.empty()) throw ConfigError("validate-pilots: no pilots given (use --config or --pilot k,l,q)");
  const DDGrid grid(M, N, 30e3);
  const PilotSetReport rep = validate_pilot_set(pilots, grid, ReadoffRegion(hd, hl), a.margin);
  for (const PilotPairReport& p : rep.pairs) {
    std::cout << "pair v=" << p.v << " j=" << p.j << " min_distance=" << p.min_distance << " nearest=(" << p.nearest.k
              << "," << p.nearest.l << ") " << (p.pass ? "PASS" : "FAIL") << '\n';
  }
  for (const auto& w : rep.warnings) std::cout << "warning: " << w << '\n';
  std::cout << (rep.pass ? "PASS" : "FAIL") << '\n';
  return rep.pass ? 0 : kExitFail;
}

struct TheoremArgs {
  int M = 5;
  int N = 7;
  std::int64_t q = 1;
  int max_offset = 2;
};

int cmd_verify(const TheoremArgs& a) {
  const DDGrid grid(a.M, a.N, 30e3);
  const auto mn = static_cast<int>(grid.size());
  const LagBox period{0, mn - 1, 0, mn - 1};
  std::vector<SpreadPilotConfig> cfgs;
  for (int k = 0; k <= a.max_offset; ++k) {
    for (int l = 0; l <= a.max_offset; ++l) cfgs.push_back({k, l, a.q});
  }
  std::vector<QuasiPeriodicSignal> xs;
  for (const auto& c : cfgs) xs.push_back(build_spread_pilot(c, grid));
  int pairs = 0, failures = 0;
  double worst = 0.0;
  for (std::size_t j = 0; j < cfgs.size(); ++j) {
    for (std::size_t v = 0; v < cfgs.size(); ++v) {
      const std::vector<LatticePoint> pred = predict_cross_support(cfgs[j], cfgs[v], grid);
      const AmbiguitySurface A = cross_ambiguity(xs[v], xs[j], period);
      std::vector<char> on(static_cast<std::size_t>(mn) * static_cast<std::size_t>(mn), 0);
      for (const auto& p : pred) on[static_cast<std::size_t>(p.k * mn + p.l)] = 1;
      double dev = 0.0;
      for (int k = 0; k < mn; ++k) {
        for (int l = 0; l < mn; ++l) {
          const double mag = std::abs(A.values()(k, l));
          dev = std::max(dev, on[static_cast<std::size_t>(k * mn + l)] ? std::abs(mag - 1.0) : mag);
        }
      }
      worst = std::max(worst, dev);
      ++pairs;
      if (dev > 1e-9) ++failures;
      if (v == 0 && j == 0) std::cout << "support size per pair: " << pred.size() << " of " << mn * mn << " lags\n";
    }
  }
  std::cout << "M=" << a.M << " N=" << a.N << " q=" << a.q << " pairs=" << pairs << " failures=" << failures
            << " max_deviation=" << worst << '\n';
  return failures == 0 ? 0 : kExitFail;
}

struct AmbArgs {
  std::string config;
  int M = 31;
  int N = 37;
  std::string pilot_a;
  std::string pilot_b;
  int window_k = 0;
  int window_l = 0;
  int rx = 0;
  int tx = 0;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_ambiguity(const AmbArgs& a) {
  std::ofstream file;
  std::ostream& os = open_out(a.out, file);
  if (!a.config.empty()) {
    // |A_{y_rx, x_s,tx}| of the pilot-only received signal (no data, no noise).
    const SimConfig cfg = load_config(a.config);
    const Simulator sim(cfg);
    const DDGrid& g = sim.grid();
    if (a.rx < 0 || a.rx >= cfg.n_r || a.tx < 0 || a.tx >= cfg.n_t) throw ConfigError("ambiguity-map: antenna index out of range");
    Rng rng(a.seed);
    const auto channels = sample_veh_a_mimo(cfg.channel, cfg.n_r, cfg.n_t, rng);
    QuasiPeriodicSignal y = QuasiPeriodicSignal::zeros(g);
    for (int j = 0; j < cfg.n_t; ++j) {
      const DDTaps h = effective_channel_taps(channels[static_cast<std::size_t>(a.rx * cfg.n_t + j)], cfg.filter(), g,
                                              sim.truth_support(), cfg.quadrature);
      y = y + twisted_conv(h, sim.pilots()[static_cast<std::size_t>(j)]);
    }
    const int wk = a.window_k > 0 ? a.window_k : g.M() * g.N() / 2;
    const int wl = a.window_l > 0 ? a.window_l : g.M() * g.N() / 2;
    const AmbiguitySurface A = cross_ambiguity(y, sim.pilots()[static_cast<std::size_t>(a.tx)], LagBox{-wk, wk, -wl, wl});
    os << "k,l,abs_value\n";
    for (int k = -wk; k <= wk; ++k) {
      for (int l = -wl; l <= wl; ++l) os << k << ',' << l << ',' << std::abs(A.at({k, l})) << '\n';
    }
    return 0;
  }
  if (a.pilot_a.empty() || a.pilot_b.empty()) {
    throw ConfigError("ambiguity-map: give --config, or both --a and --b pilots");
  }
  const DDGrid g(a.M, a.N, 30e3);
  const auto xa = build_spread_pilot(parse_pilot(a.pilot_a), g);
  const auto xb = build_spread_pilot(parse_pilot(a.pilot_b), g);
  const int wk = a.window_k > 0 ? a.window_k : g.M() * g.N() / 2;
  const int wl = a.window_l > 0 ? a.window_l : g.M() * g.N() / 2;
  const AmbiguitySurface A = cross_ambiguity(xa, xb, LagBox{-wk, wk, -wl, wl});
  os << "k,l,abs_value\n";
  for (int k = -wk; k <= wk; ++k) {
    for (int l = -wl; l <= wl; ++l) os << k << ',' << l << ',' << std::abs(A.at({k, l})) << '\n';
  }
  return 0;
}

struct TapsArgs {
  std::string config;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_taps(const TapsArgs& a) {
  const SimConfig cfg = load_config(a.config);
  const Simulator sim(cfg);
  Rng rng(a.seed);
  const auto channels = sample_veh_a_mimo(cfg.channel, cfg.n_r, cfg.n_t, rng);
  std::ofstream file;
  std::ostream& os = open_out(a.out, file);
  os << "rx,tx,k,l,re,im,abs\n" << std::setprecision(12);
  for (int i = 0; i < cfg.n_r; ++i) {
    for (int j = 0; j < cfg.n_t; ++j) {
      const DDTaps h = effective_channel_taps(channels[static_cast<std::size_t>(i * cfg.n_t + j)], cfg.filter(),
                                              sim.grid(), sim.truth_support(), cfg.quadrature);
      for (const Tap& t : h.taps()) {
        os << i << ',' << j << ',' << t.lag.k << ',' << t.lag.l << ',' << t.value.real() << ',' << t.value.imag()
           << ',' << std::abs(t.value) << '\n';
      }
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zak-OTFS superimposed spread-pilot MIMO link simulator"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Run the SNR/PDR/iteration sweep of a config file");
  s->add_option("--config", sim.config, "YAML config file")->required();
  s->add_option("--seed", sim.seed, "Override the base seed");
  s->add_option("--out", sim.out, "CSV output path (JSON written alongside)");
  s->add_option("--frames", sim.frames, "Override frames per sweep point");
  s->add_option("--threads", sim.threads, "Worker threads (ZOTFS_THREADS takes precedence)");
  s->add_flag("--quiet", sim.quiet, "No progress output");

  PilotArgs pv;
  auto* v = app.add_subcommand("validate-pilots", "Check cross-lattice separation from the read-off region");
  v->add_option("--config", pv.config, "YAML config file supplying grid, region and pilots");
  v->add_option("--M", pv.M, "Delay bins");
  v->add_option("--N", pv.N, "Doppler bins");
  v->add_option("--pilot", pv.pilots, "Pilot as k,l,q (repeatable)");
  v->add_option("--margin", pv.margin, "Channel-spread margin in bins");
  v->add_option("--half-delay", pv.half_delay, "Read-off half-diagonal along delay");
  v->add_option("--half-doppler", pv.half_doppler, "Read-off half-diagonal along Doppler");

  TheoremArgs th;
  auto* t = app.add_subcommand("verify-theorem", "Exhaustive cross-ambiguity lattice check on a small grid");
  t->add_option("--M", th.M, "Delay bins (odd prime)");
  t->add_option("--N", th.N, "Doppler bins (odd prime)");
  t->add_option("--q", th.q, "Chirp slope");
  t->add_option("--max-offset", th.max_offset, "Pilot offsets range over [0, max-offset]^2");

  AmbArgs am;
  auto* m = app.add_subcommand("ambiguity-map", "Emit |A| over a lag window as CSV (k,l,abs_value)");
  m->add_option("--config", am.config, "Use the pilot-only received signal of this config");
  m->add_option("--M", am.M, "Delay bins");
  m->add_option("--N", am.N, "Doppler bins");
  m->add_option("--a", am.pilot_a, "First pilot k,l,q");
  m->add_option("--b", am.pilot_b, "Second pilot k,l,q");
  m->add_option("--window-k", am.window_k, "Half-width of the delay-lag window");
  m->add_option("--window-l", am.window_l, "Half-width of the Doppler-lag window");
  m->add_option("--rx", am.rx, "Receive antenna");
  m->add_option("--tx", am.tx, "Transmit antenna whose pilot is correlated");
  m->add_option("--seed", am.seed, "Channel seed");
  m->add_option("--out", am.out, "Output path (default stdout)");

  TapsArgs tp;
  auto* k = app.add_subcommand("taps", "Dump effective channel taps of one channel draw");
  k->add_option("--config", tp.config, "YAML config file")->required();
  k->add_option("--seed", tp.seed, "Channel seed");
  k->add_option("--out", tp.out, "Output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*s) return cmd_simulate(sim);
    if (*v) return cmd_validate(pv);
    if (*t) return cmd_verify(th);
    if (*m) return cmd_ambiguity(am);
    if (*k) return cmd_taps(tp);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
  return 0;
}

// SPDX-License-Identifier: Apache-2.0

#include "zotfs/channel.hpp"

#include <algorithm>
#include <cmath>

namespace zotfs {

double ChannelRealization::power() const {
  double p = 0.0;
  for (const Path& path : paths) p += std::norm(path.gain);
  return p;
}

double VehAProfile::max_delay_s() const {
  return delays_us.empty() ? 0.0 : *std::max_element(delays_us.begin(), delays_us.end()) * 1e-6;
}

std::vector<double> VehAProfile::normalized_powers() const {
  std::vector<double> p;
  p.reserve(powers_db.size());
  double total = 0.0;
  for (double db : powers_db) {
    p.push_back(db_to_linear(db));
    total += p.back();
  }
  for (double& v : p) v /= total;
  return p;
}

void VehAProfile::validate() const {
  if (delays_us.empty()) throw ConfigError("channel profile: at least one path required");
  if (delays_us.size() != powers_db.size()) throw ConfigError("channel profile: delays and powers differ in length");
  for (double d : delays_us) {
    if (!(d >= 0.0) || !std::isfinite(d)) throw ConfigError("channel profile: delays must be finite and >= 0");
  }
  if (!(nu_max_hz >= 0.0)) throw ConfigError("channel profile: nu_max must be >= 0");
}

ChannelRealization sample_veh_a(const VehAProfile& profile, Rng& rng) {
  profile.validate();
  const std::vector<double> power = profile.normalized_powers();
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi<double>);
  ChannelRealization ch;
  ch.paths.reserve(profile.paths());
  for (std::size_t p = 0; p < profile.paths(); ++p) {
    const double sigma = std::sqrt(power[p] / 2.0);
    const double re = gauss(rng);
    const double im = gauss(rng);
    const double theta = angle(rng);
    ch.paths.push_back({Complex(re, im) * sigma, profile.delays_us[p] * 1e-6, profile.nu_max_hz * std::cos(theta)});
  }
  return ch;
}

std::vector<ChannelRealization> sample_veh_a_mimo(const VehAProfile& profile, int n_r, int n_t, Rng& rng) {
  std::vector<ChannelRealization> out;
  out.reserve(static_cast<std::size_t>(n_r * n_t));
  for (int i = 0; i < n_r * n_t; ++i) out.push_back(sample_veh_a(profile, rng));
  return out;
}

ChannelRealization make_test_channel(std::vector<Path> paths) { return {std::move(paths)}; }

}  // namespace zotfs

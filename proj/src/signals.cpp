// SPDX-License-Identifier: Apache-2.0

#include "zotfs/signals.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace zotfs {

// ---------------------------------------------------------------------------
// QuasiPeriodicSignal

QuasiPeriodicSignal::QuasiPeriodicSignal(const DDGrid& grid, CMatrix fundamental)
    : grid_(grid), fund_(std::move(fundamental)) {
  if (fund_.rows() != grid_.M() || fund_.cols() != grid_.N()) {
    throw DomainError("QuasiPeriodicSignal: expected " + std::to_string(grid_.M()) + "x" + std::to_string(grid_.N()) +
                      " samples, got " + std::to_string(fund_.rows()) + "x" + std::to_string(fund_.cols()));
  }
}

QuasiPeriodicSignal QuasiPeriodicSignal::zeros(const DDGrid& grid) {
  return {grid, CMatrix::Zero(grid.M(), grid.N())};
}

QuasiPeriodicSignal QuasiPeriodicSignal::impulse(const DDGrid& grid, int k, int l, Complex weight) {
  if (k < 0 || k >= grid.M() || l < 0 || l >= grid.N()) throw DomainError("impulse: position outside fundamental domain");
  CMatrix f = CMatrix::Zero(grid.M(), grid.N());
  f(k, l) = weight;
  return {grid, std::move(f)};
}

Complex QuasiPeriodicSignal::at(std::int64_t k, std::int64_t l) const {
  const std::int64_t M = grid_.M();
  const std::int64_t N = grid_.N();
  const std::int64_t n = floor_div(k, M);
  const std::int64_t k0 = k - n * M;
  const std::int64_t l0 = pos_mod(l, N);
  const Complex v = fund_(k0, l0);
  if (n == 0) return v;
  const std::int64_t e = pos_mod(n * l0, N);
  return v * std::polar(1.0, kTwoPi<double> * static_cast<double>(e) / static_cast<double>(N));
}

QuasiPeriodicSignal QuasiPeriodicSignal::operator+(const QuasiPeriodicSignal& rhs) const {
  require_same_grid(grid_, rhs.grid_, "QuasiPeriodicSignal::operator+");
  return {grid_, fund_ + rhs.fund_};
}

QuasiPeriodicSignal QuasiPeriodicSignal::operator-(const QuasiPeriodicSignal& rhs) const {
  require_same_grid(grid_, rhs.grid_, "QuasiPeriodicSignal::operator-");
  return {grid_, fund_ - rhs.fund_};
}

QuasiPeriodicSignal QuasiPeriodicSignal::operator*(Complex scale) const { return {grid_, fund_ * scale}; }

// ---------------------------------------------------------------------------
// DDTaps

namespace {

bool lag_less(const Tap& a, const Tap& b) { return a.lag < b.lag; }

// Sort and merge duplicate lags by summation.
std::vector<Tap> normalize(std::vector<Tap> taps) {
  std::sort(taps.begin(), taps.end(), lag_less);
  std::vector<Tap> out;
  out.reserve(taps.size());
  for (const Tap& t : taps) {
    if (!out.empty() && out.back().lag == t.lag) {
      out.back().value += t.value;
    } else {
      out.push_back(t);
    }
  }
  return out;
}

}  // namespace

DDTaps::DDTaps(const DDGrid& grid, std::vector<Tap> taps) : grid_(grid), taps_(normalize(std::move(taps))) {}

DDTaps::DDTaps(const DDGrid& grid, std::span<const Lag> support, std::span<const Complex> values) : grid_(grid) {
  if (support.size() != values.size()) throw DomainError("DDTaps: support and values differ in length");
  std::vector<Tap> taps;
  taps.reserve(support.size());
  for (std::size_t i = 0; i < support.size(); ++i) taps.push_back({support[i], values[i]});
  taps_ = normalize(std::move(taps));
}

DDTaps DDTaps::impulse(const DDGrid& grid, Lag at, Complex weight) { return {grid, std::vector<Tap>{{at, weight}}}; }

Complex DDTaps::value(Lag lag) const {
  auto it = std::lower_bound(taps_.begin(), taps_.end(), Tap{lag, {}}, lag_less);
  if (it != taps_.end() && it->lag == lag) return it->value;
  return {};
}

std::vector<Lag> DDTaps::support() const {
  std::vector<Lag> out;
  out.reserve(taps_.size());
  for (const Tap& t : taps_) out.push_back(t.lag);
  return out;
}

double DDTaps::energy() const {
  double e = 0.0;
  for (const Tap& t : taps_) e += std::norm(t.value);
  return e;
}

DDTaps DDTaps::operator+(const DDTaps& rhs) const {
  require_same_grid(grid_, rhs.grid_, "DDTaps::operator+");
  std::vector<Tap> all(taps_);
  all.insert(all.end(), rhs.taps_.begin(), rhs.taps_.end());
  return {grid_, std::move(all)};
}

DDTaps DDTaps::operator-(const DDTaps& rhs) const { return *this + rhs * Complex(-1.0); }

DDTaps DDTaps::operator*(Complex scale) const {
  std::vector<Tap> out(taps_);
  for (Tap& t : out) t.value *= scale;
  return {grid_, std::move(out)};
}

// ---------------------------------------------------------------------------
// PeriodicDDSignal

PeriodicDDSignal::PeriodicDDSignal(std::int64_t period, CMatrix samples) : period_(period), samples_(std::move(samples)) {
  if (period_ < 1 || samples_.rows() != period_ || samples_.cols() != period_) {
    throw DomainError("PeriodicDDSignal: samples must be period x period");
  }
}

PeriodicDDSignal PeriodicDDSignal::chirp(const DDGrid& grid, std::int64_t slope) {
  const std::int64_t MN = grid.size();
  const UnitRoots w(MN);
  CMatrix s(MN, MN);
  const double scale = 1.0 / static_cast<double>(MN);
  for (std::int64_t k = 0; k < MN; ++k) {
    const std::int64_t kk = mul_mod(k, k, MN);
    for (std::int64_t l = 0; l < MN; ++l) {
      const std::int64_t e = mul_mod(slope, kk + mul_mod(l, l, MN), MN);
      s(k, l) = w(e) * scale;
    }
  }
  return {MN, std::move(s)};
}

PeriodicDDSignal PeriodicDDSignal::from_quasi_periodic(const QuasiPeriodicSignal& x) {
  const std::int64_t MN = x.grid().size();
  CMatrix s(MN, MN);
  for (std::int64_t k = 0; k < MN; ++k) {
    for (std::int64_t l = 0; l < MN; ++l) s(k, l) = x.at(k, l);
  }
  return {MN, std::move(s)};
}

QuasiPeriodicSignal PeriodicDDSignal::fundamental(const DDGrid& grid) const {
  if (grid.size() != period_) throw DomainError("PeriodicDDSignal::fundamental: period differs from MN");
  return {grid, samples_.topLeftCorner(grid.M(), grid.N())};
}

// ---------------------------------------------------------------------------

QuasiPeriodicSignal place_data_symbols(const CMatrix& symbols, const DDGrid& grid) {
  if (symbols.rows() != grid.M() || symbols.cols() != grid.N()) {
    throw DomainError("place_data_symbols: symbol array shape does not match the grid");
  }
  return {grid, symbols / std::sqrt(static_cast<double>(grid.size()))};
}

CVector vectorize(const QuasiPeriodicSignal& x) {
  const DDGrid& g = x.grid();
  CVector v(g.size());
  for (int k = 0; k < g.M(); ++k) {
    for (int l = 0; l < g.N(); ++l) v(vector_index(g, k, l)) = x(k, l);
  }
  return v;
}

QuasiPeriodicSignal devectorize(const CVector& v, const DDGrid& grid) {
  if (v.size() != grid.size()) {
    throw DomainError("devectorize: expected length " + std::to_string(grid.size()) + ", got " +
                      std::to_string(v.size()));
  }
  CMatrix f(grid.M(), grid.N());
  for (int k = 0; k < grid.M(); ++k) {
    for (int l = 0; l < grid.N(); ++l) f(k, l) = v(vector_index(grid, k, l));
  }
  return {grid, std::move(f)};
}

}  // namespace zotfs

// SPDX-License-Identifier: Apache-2.0

#include "zotfs/detector.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <string>

#include "zotfs/zak.hpp"

namespace zotfs {

namespace {

using Triplet = Eigen::Triplet<Complex>;

}  // namespace

BlockChannelMatrix::BlockChannelMatrix(const DDGrid& grid, int n_r, int n_t, std::vector<DDTaps> taps)
    : grid_(grid), n_r_(n_r), n_t_(n_t), taps_(std::move(taps)) {
  if (n_r < 1 || n_t < 1) throw ConfigError("BlockChannelMatrix: antenna counts must be >= 1");
  if (taps_.size() != static_cast<std::size_t>(n_r) * static_cast<std::size_t>(n_t)) {
    throw DomainError("BlockChannelMatrix: expected n_r * n_t tap sets, got " + std::to_string(taps_.size()));
  }
  const LagBox box = channel_support_box(grid);
  for (const DDTaps& t : taps_) {
    require_same_grid(t.grid(), grid, "BlockChannelMatrix");
    for (const Tap& tap : t.taps()) {
      if (!box.contains(tap.lag)) {
        throw DomainError("BlockChannelMatrix: tap (" + std::to_string(tap.lag.k) + ", " + std::to_string(tap.lag.l) +
                          ") lies outside the channel support box");
      }
    }
  }

  const int M = grid.M();
  const int N = grid.N();
  const std::int64_t mn = grid.size();
  const UnitRoots w(mn);

  std::vector<Triplet> dd;
  std::vector<Triplet> td;
  for (int i = 0; i < n_r; ++i) {
    for (int j = 0; j < n_t; ++j) {
      const DDTaps& t = taps_[static_cast<std::size_t>(i * n_t + j)];
      const std::int64_t row0 = i * mn;
      const std::int64_t col0 = j * mn;
      for (const Tap& tap : t.taps()) {
        const int dk = tap.lag.k;
        const int dl = tap.lag.l;
        for (int k = 0; k < M; ++k) {
          const std::int64_t n = -floor_div(k + dk, M);
          const std::int64_t kk = k + dk + n * M;
          for (int l = 0; l < N; ++l) {
            const std::int64_t m = -floor_div(l + dl, N);
            const std::int64_t ll = l + dl + m * N;
            const Complex v = tap.value * w(n * l * M + (k + n * M) * dl);
            dd.emplace_back(row0 + kk * N + ll, col0 + static_cast<std::int64_t>(k) * N + l, v);
          }
        }
        for (std::int64_t s = 0; s < mn; ++s) {
          td.emplace_back(row0 + s, col0 + pos_mod(s - dk, mn), tap.value * w((s - dk) * dl));
        }
      }
    }
  }
  dd_.resize(n_r * mn, n_t * mn);
  dd_.setFromTriplets(dd.begin(), dd.end());
  dd_rows_ = dd_;
  td_.resize(n_r * mn, n_t * mn);
  td_.setFromTriplets(td.begin(), td.end());
}

SparseCMatrix BlockChannelMatrix::block(int i, int j) const {
  if (i < 0 || i >= n_r_ || j < 0 || j >= n_t_) throw DomainError("BlockChannelMatrix::block: index out of range");
  const auto mn = static_cast<Eigen::Index>(grid_.size());
  return dd_.block(i * mn, j * mn, mn, mn);
}

BlockChannelMatrix build_block_matrix(std::span<const DDTaps> taps, int n_r, int n_t, const DDGrid& grid) {
  return {grid, n_r, n_t, std::vector<DDTaps>(taps.begin(), taps.end())};
}

CVector stack(std::span<const QuasiPeriodicSignal> signals) {
  if (signals.empty()) return {};
  const auto mn = static_cast<Eigen::Index>(signals.front().grid().size());
  CVector v(mn * static_cast<Eigen::Index>(signals.size()));
  for (std::size_t i = 0; i < signals.size(); ++i) {
    require_same_grid(signals[i].grid(), signals.front().grid(), "stack");
    v.segment(static_cast<Eigen::Index>(i) * mn, mn) = vectorize(signals[i]);
  }
  return v;
}

std::vector<QuasiPeriodicSignal> unstack(const CVector& v, const DDGrid& grid, int count) {
  const auto mn = static_cast<Eigen::Index>(grid.size());
  if (count < 0 || v.size() != mn * count) throw DomainError("unstack: length differs from count * MN");
  std::vector<QuasiPeriodicSignal> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(devectorize(v.segment(i * mn, mn), grid));
  return out;
}

double DetectionConfig::symbol_amplitude(const DDGrid& grid) const {
  return std::sqrt(data_energy / (static_cast<double>(n_t) * static_cast<double>(grid.size())));
}

double DetectionConfig::regularizer(const DDGrid& grid) const {
  const double a = symbol_amplitude(grid);
  return noise_variance / (a * a);
}

void DetectionConfig::validate() const {
  if (!(data_energy >= 0.0) || !(pilot_energy >= 0.0)) throw ConfigError("DetectionConfig: energies must be >= 0");
  if (!(noise_variance > 0.0)) throw ConfigError("DetectionConfig: noise variance must be > 0");
  if (n_t < 1) throw ConfigError("DetectionConfig: n_t must be >= 1");
  if (max_las_steps < 0) throw ConfigError("DetectionConfig: max_las_steps must be >= 0");
}

CVector mmse_equalize(const BlockChannelMatrix& H, const CVector& y, const DetectionConfig& cfg) {
  cfg.validate();
  if (cfg.n_t != H.n_t()) throw ConfigError("mmse_equalize: config n_t differs from the channel matrix");
  if (!(cfg.data_energy > 0.0)) throw ConfigError("mmse_equalize: data energy must be > 0");
  const DDGrid& g = H.grid();
  const auto mn = static_cast<Eigen::Index>(g.size());
  if (y.size() != H.n_r() * mn) throw DomainError("mmse_equalize: y length differs from n_r MN");

  CVector y_td(y.size());
  for (int i = 0; i < H.n_r(); ++i) {
    y_td.segment(i * mn, mn) = to_delay_domain(devectorize(y.segment(i * mn, mn), g));
  }
  const SparseCMatrix& Ht = H.delay_domain();
  const SparseCMatrix HtH = Ht.adjoint();
  SparseCMatrix A = HtH * Ht;
  SparseCMatrix reg(A.rows(), A.cols());
  reg.setIdentity();
  A += reg * Complex(cfg.regularizer(g), 0.0);

  Eigen::SimplicialLLT<SparseCMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> llt(A);
  if (llt.info() != Eigen::Success) throw NumericalError("mmse_equalize: Cholesky factorization failed");
  const CVector x_td = llt.solve(HtH * y_td);
  if (llt.info() != Eigen::Success) throw NumericalError("mmse_equalize: triangular solve failed");

  CVector x(H.n_t() * mn);
  for (int j = 0; j < H.n_t(); ++j) {
    x.segment(j * mn, mn) = vectorize(from_delay_domain(x_td.segment(j * mn, mn), g));
  }
  return x;
}

RVector quantize(const CVector& soft) {
  RVector b(soft.size());
  for (Eigen::Index i = 0; i < soft.size(); ++i) b(i) = soft(i).real() < 0.0 ? -1.0 : 1.0;
  return b;
}

double ml_cost(const BlockChannelMatrix& H, const CVector& y, const RVector& symbols, const DetectionConfig& cfg) {
  const double a = cfg.symbol_amplitude(H.grid());
  const CVector r = y - a * (H.matrix() * symbols.cast<Complex>());
  return r.squaredNorm();
}

LasResult las_search(const BlockChannelMatrix& H, const CVector& y, const RVector& init, const DetectionConfig& cfg) {
  cfg.validate();
  const SparseCMatrix& D = H.matrix();
  const auto& R = H.matrix_rows();
  if (init.size() != D.cols()) throw DomainError("las_search: initial vector length differs from n_t MN");
  if (y.size() != D.rows()) throw DomainError("las_search: y length differs from n_r MN");
  for (Eigen::Index i = 0; i < init.size(); ++i) {
    if (init(i) != 1.0 && init(i) != -1.0) throw DomainError("las_search: initial vector is not BPSK-valued");
  }
  const double a = cfg.symbol_amplitude(H.grid());

  LasResult res;
  res.symbols = init;
  CVector r = y - a * (D * init.cast<Complex>());
  CVector z = D.adjoint() * r;
  RVector gram(D.cols());
  for (Eigen::Index c = 0; c < D.cols(); ++c) gram(c) = D.col(c).squaredNorm();
  double cost = r.squaredNorm();
  res.cost_trace.push_back(cost);

  for (int step = 0;; ++step) {
    Eigen::Index best = -1;
    double best_delta = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double delta = 4.0 * a * res.symbols(i) * z(i).real() + 4.0 * a * a * gram(i);
      if (delta < best_delta) {
        best_delta = delta;
        best = i;
      }
    }
    if (best < 0) break;
    if (step >= cfg.max_las_steps) {
      res.budget_exhausted = true;
      break;
    }
    const double scale = 2.0 * a * res.symbols(best);
    res.symbols(best) = -res.symbols(best);
    for (SparseCMatrix::InnerIterator it(D, best); it; ++it) {
      const Complex v = scale * it.value();
      r(it.row()) += v;
      for (Eigen::SparseMatrix<Complex, Eigen::RowMajor>::InnerIterator jt(R, it.row()); jt; ++jt) {
        z(jt.col()) += std::conj(jt.value()) * v;
      }
    }
    cost += best_delta;
    res.cost_trace.push_back(cost);
    res.flips.push_back(best);
  }
  return res;
}

Detection detect(const BlockChannelMatrix& H, std::span<const QuasiPeriodicSignal> y_pilot_cancelled,
                 const DetectionConfig& cfg) {
  if (y_pilot_cancelled.size() != static_cast<std::size_t>(H.n_r())) {
    throw DomainError("detect: expected one received signal per receive antenna");
  }
  const CVector y = stack(y_pilot_cancelled);
  Detection out;
  out.mmse_symbols = quantize(mmse_equalize(H, y, cfg));
  out.las = las_search(H, y, out.mmse_symbols, cfg);
  const DDGrid& g = H.grid();
  const auto mn = static_cast<Eigen::Index>(g.size());
  for (int j = 0; j < H.n_t(); ++j) {
    RMatrix s(g.M(), g.N());
    for (int k = 0; k < g.M(); ++k) {
      for (int l = 0; l < g.N(); ++l) s(k, l) = out.las.symbols(j * mn + vector_index(g, k, l));
    }
    out.symbols.push_back(std::move(s));
  }
  return out;
}

}  // namespace zotfs

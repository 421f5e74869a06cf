// SPDX-License-Identifier: Apache-2.0
//
// Vectorized MIMO input-output relation and MMSE-LAS detection for BPSK.

#pragma once

#include <span>
#include <vector>

#include "zotfs/region.hpp"
#include "zotfs/signals.hpp"

namespace zotfs {

/// n_r MN x n_t MN block matrix with H_ij vec(x) = vec(h_ij *sd x). Block (i, j)
/// occupies rows [i MN, (i+1) MN) and columns [j MN, (j+1) MN); taps are stored
/// at [i * n_t + j]. Alongside the DD-domain matrix, the same operator is kept in
/// the critically sampled delay domain, where it is cyclically banded.
class BlockChannelMatrix {
 public:
  /// Throws DomainError when any tap lies outside the channel support box
  /// k in [-2M+1, 2M-1], l in [-2N+1, 2N-1], or when the tap count is not n_r n_t.
  BlockChannelMatrix(const DDGrid& grid, int n_r, int n_t, std::vector<DDTaps> taps);

  const DDGrid& grid() const { return grid_; }
  int n_r() const { return n_r_; }
  int n_t() const { return n_t_; }
  const DDTaps& taps(int i, int j) const { return taps_[static_cast<std::size_t>(i * n_t_ + j)]; }

  /// Assembled DD-domain matrix (column-major sparse).
  const SparseCMatrix& matrix() const { return dd_; }
  /// The same matrix stored row-major, for H^H products.
  const Eigen::SparseMatrix<Complex, Eigen::RowMajor>& matrix_rows() const { return dd_rows_; }
  /// Block operator in the delay domain, U_r H U_t^H with U the unitary discrete Zak map.
  const SparseCMatrix& delay_domain() const { return td_; }

  SparseCMatrix block(int i, int j) const;
  CVector apply(const CVector& x) const { return dd_ * x; }

 private:
  DDGrid grid_;
  int n_r_;
  int n_t_;
  std::vector<DDTaps> taps_;
  SparseCMatrix dd_;
  Eigen::SparseMatrix<Complex, Eigen::RowMajor> dd_rows_;
  SparseCMatrix td_;
};

/// H_ij entries from the closed-form sum over the (n, m) images of each tap.
BlockChannelMatrix build_block_matrix(std::span<const DDTaps> taps, int n_r, int n_t, const DDGrid& grid);

/// Stack per-antenna signals into one vector, antenna-major.
CVector stack(std::span<const QuasiPeriodicSignal> signals);
std::vector<QuasiPeriodicSignal> unstack(const CVector& v, const DDGrid& grid, int count);

/// BPSK detection parameters. Each transmitted DD sample is a b with b = +-1 and
/// a = sqrt(E_d / (n_t MN)).
struct DetectionConfig {
  double data_energy = 1.0;   // E_d
  double pilot_energy = 0.0;  // E_p
  double noise_variance = 1e-2;  // N_0 per DD sample
  int n_t = 1;
  int max_las_steps = 100000;

  double symbol_amplitude(const DDGrid& grid) const;
  /// MMSE regularizer N_0 / a^2 = n_t MN N_0 / E_d.
  double regularizer(const DDGrid& grid) const;
  void validate() const;
};

/// (H^H H + lambda I)^{-1} H^H y, an estimate of the transmitted DD samples a b.
/// Solved in the delay domain by sparse Cholesky; throws NumericalError if the
/// factorization fails.
CVector mmse_equalize(const BlockChannelMatrix& H, const CVector& y, const DetectionConfig& cfg);

/// Nearest BPSK point, sign(Re) with ties to +1.
RVector quantize(const CVector& soft);

struct LasResult {
  RVector symbols;
  /// Cost ||y - a H b||^2 after each accepted flip; the first entry is the initial cost.
  std::vector<double> cost_trace;
  std::vector<Eigen::Index> flips;
  bool budget_exhausted = false;
};

/// Likelihood ascent search over single-symbol flips. Each step flips the
/// symbol with the most negative cost change (lowest index among ties) and
/// stops at a 1-flip local minimum or after max_las_steps flips.
LasResult las_search(const BlockChannelMatrix& H, const CVector& y, const RVector& init, const DetectionConfig& cfg);

/// ||y - a H b||^2.
double ml_cost(const BlockChannelMatrix& H, const CVector& y, const RVector& symbols, const DetectionConfig& cfg);

struct Detection {
  std::vector<RMatrix> symbols;  // per transmit antenna, M x N of +-1
  RVector mmse_symbols;
  LasResult las;
};

/// MMSE, quantization, LAS, then per-antenna reshaping of the stacked symbols.
Detection detect(const BlockChannelMatrix& H, std::span<const QuasiPeriodicSignal> y_pilot_cancelled,
                 const DetectionConfig& cfg);

}  // namespace zotfs

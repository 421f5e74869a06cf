// SPDX-License-Identifier: Apache-2.0
//
// Shared scalar/matrix aliases, error types and integer helpers.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace zotfs {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using SparseCMatrix = Eigen::SparseMatrix<Complex>;

template <typename Real>
inline constexpr Real kTwoPi = Real(2) * std::numbers::pi_v<Real>;

/// Invalid configuration or caller-supplied parameters.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Inputs violate a mathematical precondition (non-coprime slope, shape mismatch, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure failed to converge or factorize.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

constexpr std::int64_t pos_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

constexpr std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m) {
  __extension__ using Wide = __int128;
  const Wide p = static_cast<Wide>(pos_mod(a, m)) * static_cast<Wide>(pos_mod(b, m));
  return static_cast<std::int64_t>(p % m);
}

constexpr std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b != 0) {
    const std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool is_prime(std::int64_t n);

/// Table of the order-th roots of unity, exp(j 2 pi e / order), indexed by integer exponent.
class UnitRoots {
 public:
  explicit UnitRoots(std::int64_t order);

  Complex operator()(std::int64_t exponent) const { return table_[static_cast<std::size_t>(pos_mod(exponent, order_))]; }
  std::int64_t order() const { return order_; }

 private:
  std::int64_t order_;
  std::vector<Complex> table_;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace zotfs

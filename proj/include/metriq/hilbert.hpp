// Copyright 2026 The metriq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Metric operators and the modified inner product <phi|eta psi> they define.
 *
 * A metric eta is Hermitian positive-definite. It induces the eta-adjoint
 * M^ddagger = eta^{-1} M^dagger eta and the change of representation
 * M -> eta^{-1/2} M eta^{1/2}, which maps operators on the Euclidean space
 * to unitarily-equivalent operators on the eta-space without changing any
 * expectation value.
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "metriq/errors.hpp"
#include "metriq/linalg.hpp"

namespace metriq {

namespace tolerance {
/// Metrics whose smallest eigenvalue is at or below this are singular.
inline constexpr double kPositiveDefinite = 1e-12;
/// Slack on eta <= I and on the unit-ball constraint for states.
inline constexpr double kSubidentity = 1e-12;
inline constexpr double kNormalization = 1e-12;
/// Density-operator checks (Hermiticity, positivity, trace <= 1).
inline constexpr double kDensity = 1e-10;
}  // namespace tolerance

class MetricOperator;
MetricOperator validate_metric(const ComplexMatrix& m);

/// A validated metric operator with its spectral data cached.
class MetricOperator {
 public:
  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  const HermitianEigensystem& eigensystem() const noexcept { return eig_; }
  std::size_t dim() const noexcept { return matrix_.rows(); }
  /// ||eta||_op, i.e. the largest eigenvalue.
  double norm() const noexcept { return eig_.max(); }
  bool subidentity() const noexcept { return subidentity_; }

  const ComplexMatrix& sqrt() const noexcept { return sqrt_; }
  const ComplexMatrix& inv_sqrt() const noexcept { return inv_sqrt_; }
  ComplexMatrix inverse_matrix() const {
    return hermitian_part(eig_.map([](double x) { return Complex{1.0 / x, 0.0}; }));
  }
  /// eta^{-1} as a metric in its own right.
  MetricOperator inverse() const { return validate_metric(inverse_matrix()); }

 private:
  friend MetricOperator validate_metric(const ComplexMatrix& m);
  MetricOperator() = default;

  ComplexMatrix matrix_;
  HermitianEigensystem eig_;
  ComplexMatrix sqrt_;
  ComplexMatrix inv_sqrt_;
  bool subidentity_ = false;
};

inline MetricOperator validate_metric(const ComplexMatrix& m) {
  require_square(m, "metric");
  if (!m.is_finite()) throw Error(ErrorCode::kInvalidArgument, "metric has non-finite entries");
  MetricOperator eta;
  eta.eig_ = hermitian_eig(m);
  if (eta.eig_.min() <= tolerance::kPositiveDefinite) {
    throw Error(ErrorCode::kNotPositiveDefinite,
                "min eigenvalue " + std::to_string(eta.eig_.min()));
  }
  eta.matrix_ = hermitian_part(m);
  eta.subidentity_ = eta.eig_.max() <= 1.0 + tolerance::kSubidentity;
  eta.sqrt_ = hermitian_part(eta.eig_.map([](double x) { return Complex{std::sqrt(x), 0.0}; }));
  eta.inv_sqrt_ =
      hermitian_part(eta.eig_.map([](double x) { return Complex{1.0 / std::sqrt(x), 0.0}; }));
  return eta;
}

/// A (possibly subnormalized) vector in the closed unit ball.
class StateVector {
 public:
  explicit StateVector(std::vector<Complex> amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.empty()) throw Error(ErrorCode::kInvalidArgument, "empty state vector");
    if (norm() > 1.0 + tolerance::kNormalization) {
      throw Error(ErrorCode::kSupernormalized, "Euclidean norm " + std::to_string(norm()));
    }
  }

  /// Computational basis vector |k> in dimension dim.
  static StateVector basis(std::size_t dim, std::size_t k) {
    std::vector<Complex> a(dim);
    a.at(k) = 1.0;
    return StateVector(std::move(a));
  }

  std::size_t dim() const noexcept { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
  double norm() const {
    double s = 0.0;
    for (const auto& z : amplitudes_) s += std::norm(z);
    return std::sqrt(s);
  }

 private:
  std::vector<Complex> amplitudes_;
};

namespace detail {
inline void require_dim(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got) {
    throw Error(ErrorCode::kDimMismatch, std::string(what) + ": expected dimension " +
                                             std::to_string(expected) + ", got " +
                                             std::to_string(got));
  }
}
}  // namespace detail

/// <phi| eta |psi>
inline Complex eta_inner(const MetricOperator& eta, const StateVector& phi, const StateVector& psi) {
  detail::require_dim(eta.dim(), phi.dim(), "eta_inner bra");
  detail::require_dim(eta.dim(), psi.dim(), "eta_inner ket");
  const auto eta_psi = eta.matrix() * psi.amplitudes();
  return inner(phi.amplitudes(), eta_psi);
}

/// eta^{-1} M^dagger eta
inline ComplexMatrix eta_adjoint(const MetricOperator& eta, const ComplexMatrix& m) {
  require_square(m, "eta_adjoint operand");
  detail::require_dim(eta.dim(), m.rows(), "eta_adjoint");
  return eta.inverse_matrix() * m.adjoint() * eta.matrix();
}

/// eta^{-1/2} M eta^{1/2}
inline ComplexMatrix representation_change(const MetricOperator& eta, const ComplexMatrix& m) {
  require_square(m, "representation_change operand");
  detail::require_dim(eta.dim(), m.rows(), "representation_change");
  return eta.inv_sqrt() * m * eta.sqrt();
}

/// |psi><psi|
inline ComplexMatrix lift(const StateVector& psi) {
  return outer(psi.amplitudes(), psi.amplitudes());
}

/// |psi><psi| eta, defined on the eta-unit ball.
inline ComplexMatrix lift_eta(const MetricOperator& eta, const StateVector& psi) {
  const double eta_norm_sq = eta_inner(eta, psi, psi).real();
  if (eta_norm_sq > 1.0 + tolerance::kNormalization) {
    throw Error(ErrorCode::kSupernormalized, "eta-norm squared " + std::to_string(eta_norm_sq));
  }
  return lift(psi) * eta.matrix();
}

/// Hermitian, PSD within 1e-10 and trace at most 1 + 1e-10.
inline bool is_density_operator(const ComplexMatrix& rho) {
  if (!rho.is_square() || rho.empty() || !rho.is_finite()) return false;
  if (!is_hermitian(rho)) return false;
  const auto es = detail::jacobi_eigensystem(hermitian_part(rho));
  return es.min() >= -tolerance::kDensity && rho.trace().real() <= 1.0 + tolerance::kDensity;
}

inline void require_density(const ComplexMatrix& rho, std::size_t dim, const char* what) {
  if (rho.rows() != dim || rho.cols() != dim) {
    throw Error(ErrorCode::kDimMismatch, std::string(what) + " must be " + std::to_string(dim) +
                                             "x" + std::to_string(dim));
  }
  if (!is_density_operator(rho)) {
    throw Error(ErrorCode::kInvalidDensityOperator,
                std::string(what) + " is not a density operator");
  }
}

}  // namespace metriq

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
 * Qubit-to-qutrit unitary dilation of G_eta for a norm-one metric.
 *
 * With spec(eta^{1/2}) = {1, r} and u the r-eigenvector of eta^{1/2} scaled
 * to ||u|| = sqrt(1 - r^2),
 *
 *       [ eta^{1/2}              u          ]
 *   U = [                                   ]
 *       [ -e^{i theta} u^dagger  e^{i theta} r ]
 *
 * is unitary and P U (rho (+) 0) U^dagger P = G_eta(rho) (+) 0, where P
 * projects onto the first two levels.
 */

#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "metriq/channels.hpp"
#include "metriq/errors.hpp"
#include "metriq/hilbert.hpp"
#include "metriq/linalg.hpp"

namespace metriq {

namespace tolerance {
inline constexpr double kNormOne = 1e-10;
/// Below this spectral gap the metric is treated as the identity (u = 0).
inline constexpr double kDegenerateGap = 1e-12;
}  // namespace tolerance

struct NormalizedMetric {
  MetricOperator eta_tilde;
  double scale;
};

/// eta / ||eta||, so that G_eta = ||eta|| G_{eta_tilde}.
inline NormalizedMetric normalize_metric(const MetricOperator& eta) {
  if (eta.dim() != 2) throw Error(ErrorCode::kDimMismatch, "only qubit metrics can be dilated");
  const double scale = eta.norm();
  return {validate_metric(eta.matrix() / scale), scale};
}

struct DilationUnitary {
  ComplexMatrix matrix;
  MetricOperator eta_tilde;
  double theta;
  /// Smaller eigenvalue of eta_tilde^{1/2}.
  double r_small;

  /// Third column, first two entries.
  std::vector<Complex> u() const { return {matrix(0, 2), matrix(1, 2)}; }
};

inline DilationUnitary build_dilation(const MetricOperator& eta_tilde, double theta = 0.0) {
  if (eta_tilde.dim() != 2) throw Error(ErrorCode::kDimMismatch, "dilation needs a 2x2 metric");
  if (std::abs(eta_tilde.norm() - 1.0) > tolerance::kNormOne) {
    throw Error(ErrorCode::kNotNormalized, "||eta_tilde|| = " + std::to_string(eta_tilde.norm()));
  }
  const auto& es = eta_tilde.eigensystem();
  const double lambda_small = es.min();
  ComplexMatrix m(3, 3);
  const ComplexMatrix& root = eta_tilde.sqrt();
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) m(i, j) = root(i, j);

  const Complex phase = std::exp(Complex{0.0, theta});
  double r = 1.0;
  Complex u0{};
  Complex u1{};
  if (1.0 - lambda_small > tolerance::kDegenerateGap) {
    r = std::sqrt(lambda_small);
    // eigenvectors are already phase-fixed: first significant component real positive
    const double len = std::sqrt(1.0 - r * r);
    u0 = es.eigenvectors(0, 0) * len;
    u1 = es.eigenvectors(1, 0) * len;
  }
  m(0, 2) = u0;
  m(1, 2) = u1;
  m(2, 0) = -phase * std::conj(u0);
  m(2, 1) = -phase * std::conj(u1);
  m(2, 2) = phase * r;
  return {std::move(m), eta_tilde, theta, r};
}

/// rho (+) 0 for a 2x2 rho.
inline ComplexMatrix embed(const ComplexMatrix& rho) {
  if (rho.rows() != 2 || rho.cols() != 2) {
    throw Error(ErrorCode::kDimMismatch, "embed expects a 2x2 operator");
  }
  return direct_sum(rho, ComplexMatrix(1, 1));
}

struct Postselection {
  /// Upper-left 2x2 block of U sigma U^dagger (unnormalized).
  ComplexMatrix sub_state;
  double probability;
};

inline Postselection postselect(const DilationUnitary& dil, const ComplexMatrix& sigma) {
  require_density(sigma, 3, "postselect input");
  const ComplexMatrix out = dil.matrix * sigma * dil.matrix.adjoint();
  ComplexMatrix sub = hermitian_part(block(out, 0, 0, 2, 2));
  const double prob = sub.trace().real();
  return {std::move(sub), prob};
}

}  // namespace metriq

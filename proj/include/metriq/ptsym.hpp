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
 * The qubit PT-symmetric Hamiltonian
 *
 *   H = [[r e^{i phi}, s], [s, r e^{-i phi}]],   s > r sin(phi) >= 0,
 *
 * its metric eta2 (H^dagger = eta2 H eta2^{-1}), the Hermitian partner
 * h = eta2^{1/2} H eta2^{-1/2}, and the non-unitary propagator
 * U(t) = exp(-i H t) with hbar = 1.
 */

#pragma once

#include <cmath>
#include <string>

#include "metriq/channels.hpp"
#include "metriq/errors.hpp"
#include "metriq/hilbert.hpp"
#include "metriq/linalg.hpp"

namespace metriq {

namespace tolerance {
/// Relative distance from the exceptional point s = r sin(phi) treated as broken.
inline constexpr double kExceptionalPoint = 1e-12;
}  // namespace tolerance

struct PtHamiltonian {
  double r = 0.0;
  double s = 1.0;
  double phi = 0.0;

  ComplexMatrix matrix() const {
    return {{r * std::exp(Complex{0.0, phi}), s}, {s, r * std::exp(Complex{0.0, -phi})}};
  }
};

struct PtSystem {
  PtHamiltonian hamiltonian;
  ComplexMatrix h_matrix;
  MetricOperator eta2;
  MetricOperator eta2_inv;
  /// 1 / ||eta2^{-1}||
  double kappa;
  ComplexMatrix h_pt_hermitian;
};

inline PtSystem build_pt_system(const PtHamiltonian& p) {
  if (!std::isfinite(p.r) || !std::isfinite(p.s) || !std::isfinite(p.phi)) {
    throw Error(ErrorCode::kInvalidArgument, "non-finite PT parameters");
  }
  const double gain = p.r * std::sin(p.phi);
  if (p.r < 0.0 || p.s <= 0.0 || gain < 0.0) {
    throw Error(ErrorCode::kNegativeParameters,
                "need r >= 0, s > 0 and r sin(phi) >= 0");
  }
  if (p.s - gain <= tolerance::kExceptionalPoint * p.s) {
    throw Error(ErrorCode::kBrokenPtRegime,
                "s = " + std::to_string(p.s) + " <= r sin(phi) = " + std::to_string(gain));
  }
  const double plus = p.s + gain;
  const double minus = p.s - gain;
  const ComplexMatrix eta2{{p.s / plus, -kI * gain / plus}, {kI * gain / plus, p.s / plus}};
  const ComplexMatrix eta2_inv{{p.s / minus, kI * gain / minus}, {-kI * gain / minus, p.s / minus}};
  const ComplexMatrix h = p.matrix();
  auto eta = validate_metric(eta2);
  const ComplexMatrix h_herm = eta.sqrt() * h * eta.inv_sqrt();
  return PtSystem{p, h, std::move(eta), validate_metric(eta2_inv), minus / plus, h_herm};
}

/// exp(-i H t), from H = a I + B with B traceless and B^2 = w^2 I.
inline ComplexMatrix u_pt(const PtSystem& sys, double t) {
  if (!std::isfinite(t)) throw Error(ErrorCode::kInvalidArgument, "non-finite time");
  const ComplexMatrix& h = sys.h_matrix;
  const Complex a = 0.5 * (h(0, 0) + h(1, 1));
  ComplexMatrix b = h - ComplexMatrix::identity(2) * a;
  const Complex w = std::sqrt(b(0, 0) * b(0, 0) + b(0, 1) * b(1, 0));
  const Complex wt = w * t;
  // sin(w t) / w, with its series near w t = 0.
  const Complex sinc_t =
      std::abs(wt) < 1e-4 ? t * (1.0 - wt * wt / 6.0 + wt * wt * wt * wt / 120.0) : std::sin(wt) / w;
  ComplexMatrix u = ComplexMatrix::identity(2) * std::cos(wt) - b * (kI * sinc_t);
  return u * std::exp(-kI * a * t);
}

struct PtEvolution {
  ComplexMatrix state;
  double probability;
};

/// kappa U rho U^dagger split into the normalized state and its weight.
inline PtEvolution analytic_pt_evolution(const PtSystem& sys, const ComplexMatrix& rho, double t) {
  require_density(rho, 2, "PT input state");
  const ComplexMatrix u = u_pt(sys, t);
  const ComplexMatrix out = u * rho * u.adjoint();
  const double tr = out.trace().real();
  if (!(tr > 0.0)) {
    throw Error(ErrorCode::kInvalidDensityOperator, "input state has zero trace");
  }
  return {hermitian_part(out) / tr, sys.kappa * tr};
}

/// The three-channel factorization G_{kappa eta^-1} o exp(-i h t) o G_eta.
inline KrausChannel pt_channel(const PtSystem& sys, double t) {
  const auto unitary = KrausChannel::unitary(matrix_exp_hermitian_generator(sys.h_pt_hermitian, t));
  return compose(g_kappa_eta_inv(sys.eta2).channel, compose(unitary, g_eta(sys.eta2)));
}

}  // namespace metriq

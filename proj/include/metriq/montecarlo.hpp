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
 * Shot-level simulation of the postselected qutrit procedures.
 *
 * Every copy of the input is prepared, rotated by a dilation unitary and
 * measured with the projector onto the first two levels. Given success the
 * post-measurement state is fixed, so only the success/failure outcomes are
 * random; they are drawn from a counter-based stream indexed by the copy
 * number. The agent keeps going until N copies succeeded and reports the
 * success ratio ||eta|| N / (copies consumed).
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "metriq/channels.hpp"
#include "metriq/dilation.hpp"
#include "metriq/errors.hpp"
#include "metriq/hilbert.hpp"
#include "metriq/linalg.hpp"
#include "metriq/ptsym.hpp"
#include "metriq/rng.hpp"

namespace metriq {

namespace tolerance {
/// Per-copy success probabilities at or below this never terminate.
inline constexpr double kVanishingProbability = 1e-14;
}  // namespace tolerance

struct SimulationRecord {
  std::uint64_t requested_successes = 0;
  std::uint64_t total_copies_used = 0;
  double success_ratio = 0.0;
  /// Qutrit state carried by every successful copy (support on the first two levels).
  ComplexMatrix output_state;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  /// Upper-left 2x2 block of output_state.
  ComplexMatrix qubit_state() const { return block(output_state, 0, 0, 2, 2); }

  friend bool operator==(const SimulationRecord&, const SimulationRecord&) = default;
};

namespace detail {

inline void require_shots(std::uint64_t n) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "need at least one requested success");
}

inline void require_probability(double p) {
  if (!(p > tolerance::kVanishingProbability)) {
    throw Error(ErrorCode::kVanishingSuccessProbability,
                "per-copy success probability " + std::to_string(p));
  }
}

/// P K sigma K^dagger P on the qutrit, where P keeps the first two levels.
inline ComplexMatrix project_qubit(const ComplexMatrix& k, const ComplexMatrix& sigma) {
  ComplexMatrix out = k * sigma * k.adjoint();
  for (std::size_t i = 0; i < 3; ++i) {
    out(2, i) = 0.0;
    out(i, 2) = 0.0;
  }
  return hermitian_part(out);
}

/// Projector onto the first two qutrit levels.
inline ComplexMatrix qubit_projector() { return ComplexMatrix::diagonal({1.0, 1.0, 0.0}); }

}  // namespace detail

/// Runs the dilation procedure for G_eta until n copies succeed.
///
/// `rho` is either a qubit state (embedded as rho (+) 0) or a qutrit state.
/// A qutrit input is first measured with P; its |2> component counts as a
/// failed copy. Draw k of `rng` decides copy k.
inline SimulationRecord simulate_g_eta(const MetricOperator& eta, const ComplexMatrix& rho,
                                       std::uint64_t n, const RngStream& rng) {
  detail::require_subidentity(eta);
  if (eta.dim() != 2) throw Error(ErrorCode::kDimMismatch, "G_eta simulation needs a qubit metric");
  detail::require_shots(n);
  ComplexMatrix sigma;
  if (rho.rows() == 2 && rho.cols() == 2) {
    require_density(rho, 2, "input state");
    sigma = embed(rho);
  } else {
    require_density(rho, 3, "input state");
    sigma = rho;
  }

  const auto [eta_tilde, scale] = normalize_metric(eta);
  const auto dil = build_dilation(eta_tilde);
  const ComplexMatrix p = detail::qubit_projector();
  const ComplexMatrix kept = detail::project_qubit(dil.matrix * p, sigma);
  const double prob = kept.trace().real();
  detail::require_probability(prob);

  std::uint64_t successes = 0;
  std::uint64_t copies = 0;
  while (successes < n) {
    if (rng.uniform(copies) < prob) ++successes;
    ++copies;
  }
  return {n,
          copies,
          scale * static_cast<double>(n) / static_cast<double>(copies),
          kept / prob,
          rng.seed,
          rng.stream_id};
}

/// kappa tr(U rho U^dagger), the per-copy success probability of simulate_pt.
inline double chained_success_probability(const PtSystem& sys, const ComplexMatrix& rho, double t) {
  require_density(rho, 2, "input state");
  const ComplexMatrix u = u_pt(sys, t);
  return sys.kappa * (u * rho * u.adjoint()).trace().real();
}

/// Qutrit simulation of exp(-i H t) for a PT-symmetric H.
///
/// Per copy of rho (+) 0: postselect with U_{eta2}; rotate by
/// exp(-i (h (+) 0) t); postselect with U_{kappa eta2^{-1}}. Any failure
/// discards the copy and the next attempt starts from a fresh one, so
/// total_copies_used counts first-stage attempts. Copy k uses draws 2k and
/// 2k + 1.
inline SimulationRecord simulate_pt(const PtSystem& sys, const ComplexMatrix& rho, double t,
                                    std::uint64_t n, const RngStream& rng) {
  require_density(rho, 2, "input state");
  detail::require_shots(n);
  if (!std::isfinite(t)) throw Error(ErrorCode::kInvalidArgument, "non-finite time");

  const auto first = normalize_metric(sys.eta2);
  const auto second = normalize_metric(validate_metric(sys.eta2_inv.matrix() * sys.kappa));
  const auto u_first = build_dilation(first.eta_tilde);
  const auto u_second = build_dilation(second.eta_tilde);
  const ComplexMatrix evolve = matrix_exp_hermitian_generator(
      direct_sum(sys.h_pt_hermitian, ComplexMatrix(1, 1)), t);

  const ComplexMatrix sigma = embed(rho);
  const ComplexMatrix after_first = detail::project_qubit(u_first.matrix, sigma);
  const double p_first = after_first.trace().real();
  detail::require_probability(p_first);
  const ComplexMatrix rotated = evolve * (after_first / p_first) * evolve.adjoint();
  const ComplexMatrix after_second = detail::project_qubit(u_second.matrix, rotated);
  const double p_second = after_second.trace().real();
  detail::require_probability(p_second);

  std::uint64_t successes = 0;
  std::uint64_t copies = 0;
  while (successes < n) {
    if (rng.uniform(2 * copies) < p_first && rng.uniform(2 * copies + 1) < p_second) ++successes;
    ++copies;
  }
  const double scale = first.scale * second.scale;
  return {n,
          copies,
          scale * static_cast<double>(n) / static_cast<double>(copies),
          after_second / p_second,
          rng.seed,
          rng.stream_id};
}

}  // namespace metriq

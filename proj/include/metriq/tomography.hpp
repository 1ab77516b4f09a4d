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
 * Tomographic verification of a prover that claims to implement G_eta (+) 0
 * on a qutrit.
 *
 * The verifier sends an informationally complete set of qutrit states, the
 * prover answers with a success ratio and the state of its kept copies for
 * each input, and the verifier inverts the responses into a linear map. The
 * prover is accepted when the induced (1->1) trace-norm distance between that
 * map and G_eta (+) 0 is at most (lambda_1 - lambda_2) / 3.
 *
 * The dishonest prover applies (U_j (+) 1)^dagger . (U_j (+) 1) with
 * probability p_j and discards the copy otherwise.
 */

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <numbers>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "metriq/channels.hpp"
#include "metriq/errors.hpp"
#include "metriq/hilbert.hpp"
#include "metriq/linalg.hpp"
#include "metriq/montecarlo.hpp"
#include "metriq/rng.hpp"

namespace metriq {

namespace tolerance {
/// Choi negativity beyond this triggers eigenvalue clipping.
inline constexpr double kChoiNegativity = 1e-8;
/// Relative eigenvalue cutoff for the rank of the design Gram matrix.
inline constexpr double kGramRank = 1e-10;
inline constexpr double kDegenerateMetric = 1e-10;
}  // namespace tolerance

struct TomographyDesign {
  std::vector<ComplexMatrix> input_states;
  std::string description;
};

/// |j>, (|j>+|k>)/sqrt2 and (|j>+i|k>)/sqrt2 for j < k on the qutrit.
inline TomographyDesign default_design() {
  TomographyDesign d;
  d.description = "qutrit basis states plus real and imaginary pairwise superpositions";
  for (std::size_t j = 0; j < 3; ++j) {
    std::vector<Complex> v(3);
    v[j] = 1.0;
    d.input_states.push_back(outer(v, v));
  }
  const double h = 1.0 / std::numbers::sqrt2;
  for (std::size_t j = 0; j < 3; ++j) {
    for (std::size_t k = j + 1; k < 3; ++k) {
      std::vector<Complex> plus(3);
      plus[j] = h;
      plus[k] = h;
      d.input_states.push_back(outer(plus, plus));
      std::vector<Complex> plus_i(3);
      plus_i[j] = h;
      plus_i[k] = kI * h;
      d.input_states.push_back(outer(plus_i, plus_i));
    }
  }
  return d;
}

namespace detail {

/// Columns are vec(rho_i).
inline ComplexMatrix design_matrix(const TomographyDesign& design) {
  const std::size_t n = design.input_states.size();
  ComplexMatrix r(9, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& rho = design.input_states[i];
    if (rho.rows() != 3 || rho.cols() != 3) {
      throw Error(ErrorCode::kDimMismatch, "design states must be 3x3");
    }
    for (std::size_t k = 0; k < 9; ++k) r(k, i) = rho.data()[k];
  }
  return r;
}

}  // namespace detail

inline std::size_t design_gram_rank(const TomographyDesign& design) {
  const ComplexMatrix r = detail::design_matrix(design);
  const auto es = detail::jacobi_eigensystem(hermitian_part(r.adjoint() * r));
  const double cutoff = tolerance::kGramRank * std::max(es.max(), 0.0);
  return static_cast<std::size_t>(
      std::count_if(es.eigenvalues.begin(), es.eigenvalues.end(), [&](double x) { return x > cutoff; }));
}

struct ProverModel {
  enum class Kind { kHonest, kDishonest };

  Kind kind = Kind::kHonest;
  /// Dishonest only: 2x2 unitaries U_j and their probabilities p_j.
  std::vector<ComplexMatrix> unitaries;
  std::vector<double> probabilities;

  static ProverModel honest() { return {}; }

  static ProverModel dishonest(std::vector<ComplexMatrix> unitaries, std::vector<double> probabilities) {
    if (unitaries.empty() || unitaries.size() != probabilities.size()) {
      throw Error(ErrorCode::kInvalidArgument, "need one probability per unitary");
    }
    double total = 0.0;
    for (std::size_t j = 0; j < unitaries.size(); ++j) {
      const auto& u = unitaries[j];
      if (u.rows() != 2 || u.cols() != 2) throw Error(ErrorCode::kDimMismatch, "U_j must be 2x2");
      if (operator_norm(u.adjoint() * u - ComplexMatrix::identity(2)) > 1e-10) {
        throw Error(ErrorCode::kInvalidArgument, "U_j is not unitary");
      }
      if (!(probabilities[j] >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "p_j must be >= 0");
      total += probabilities[j];
    }
    if (!(total > 0.0) || total > 1.0 + 1e-12) {
      throw Error(ErrorCode::kInvalidArgument, "need 0 < sum p_j <= 1");
    }
    return {Kind::kDishonest, std::move(unitaries), std::move(probabilities)};
  }

  /// p = 1 - sum_j p_j
  double discard_probability() const {
    double total = 0.0;
    for (double p : probabilities) total += p;
    return kind == Kind::kHonest ? 0.0 : std::max(0.0, 1.0 - total);
  }
};

/// G_eta (+) 0 on the qutrit: Kraus operator eta^{1/2} (+) 0.
inline KrausChannel honest_channel(const MetricOperator& eta) {
  detail::require_subidentity(eta);
  if (eta.dim() != 2) throw Error(ErrorCode::kDimMismatch, "honest channel needs a qubit metric");
  return KrausChannel({direct_sum(eta.sqrt(), ComplexMatrix(1, 1))}, 3, 3);
}

/// sum_j p_j (U_j (+) 1)^dagger . (U_j (+) 1)
inline KrausChannel dishonest_channel(const ProverModel& model) {
  if (model.kind != ProverModel::Kind::kDishonest) {
    throw Error(ErrorCode::kInvalidArgument, "not a dishonest prover");
  }
  std::vector<ComplexMatrix> ops;
  for (std::size_t j = 0; j < model.unitaries.size(); ++j) {
    const ComplexMatrix v = direct_sum(model.unitaries[j], ComplexMatrix::identity(1));
    ops.push_back(v.adjoint() * std::sqrt(model.probabilities[j]));
  }
  return KrausChannel(std::move(ops), 3, 3);
}

struct ProverResponse {
  double success_ratio = 0.0;
  /// Normalized state of the kept copies; zero when nothing can be kept.
  ComplexMatrix returned_state;
  /// 0 in exact mode.
  std::uint64_t copies_returned = 0;
  std::uint64_t copies_used = 0;
};

struct ProverOptions {
  /// Report exact success probabilities instead of sampling them.
  bool exact = false;
  /// Inputs are processed in parallel on up to this many threads (0 = hardware).
  unsigned threads = 1;
};

namespace detail {

inline ProverResponse exact_response(const KrausChannel& ch, const ComplexMatrix& sigma) {
  const ComplexMatrix out = hermitian_part(apply(ch, sigma));
  const double tr = out.trace().real();
  if (tr <= tolerance::kVanishingProbability) return {0.0, ComplexMatrix(3, 3), 0, 0};
  return {tr, out / tr, 0, 0};
}

inline ProverResponse honest_response(const MetricOperator& eta, const ComplexMatrix& sigma,
                                      std::uint64_t n, const RngStream& rng) {
  try {
    const auto rec = simulate_g_eta(eta, sigma, n, rng);
    return {rec.success_ratio, rec.output_state, n, rec.total_copies_used};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kVanishingSuccessProbability) throw;
    return {0.0, ComplexMatrix(3, 3), 0, 0};
  }
}

/// Copy k survives when draw k falls below sum_j p_j; the kept state is the
/// normalized mixture.
inline ProverResponse dishonest_response(const KrausChannel& ch, double keep,
                                         const ComplexMatrix& sigma, std::uint64_t n,
                                         const RngStream& rng) {
  require_probability(keep);
  const ComplexMatrix out = hermitian_part(apply(ch, sigma));
  std::uint64_t kept = 0;
  std::uint64_t copies = 0;
  while (kept < n) {
    if (rng.uniform(copies) < keep) ++kept;
    ++copies;
  }
  return {static_cast<double>(n) / static_cast<double>(copies), out / out.trace().real(), n, copies};
}

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  std::vector<std::exception_ptr> errors(count);
  auto run = [&](std::size_t i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) run(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) run(i);
      });
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace detail

/// One response per design input; input i draws from rng.substream(i).
inline std::vector<ProverResponse> run_prover(const ProverModel& model, const MetricOperator& eta,
                                              const TomographyDesign& design, std::uint64_t n,
                                              const RngStream& rng, const ProverOptions& options = {}) {
  detail::require_subidentity(eta);
  if (eta.dim() != 2) throw Error(ErrorCode::kDimMismatch, "prover needs a qubit metric");
  if (!options.exact) detail::require_shots(n);
  for (const auto& sigma : design.input_states) require_density(sigma, 3, "design state");

  const bool honest = model.kind == ProverModel::Kind::kHonest;
  const KrausChannel channel = honest ? honest_channel(eta) : dishonest_channel(model);
  const double keep = 1.0 - model.discard_probability();

  std::vector<ProverResponse> out(design.input_states.size());
  detail::parallel_for(out.size(), options.threads, [&](std::size_t i) {
    const auto& sigma = design.input_states[i];
    if (options.exact) {
      out[i] = detail::exact_response(channel, sigma);
    } else if (honest) {
      out[i] = detail::honest_response(eta, sigma, n, rng.substream(i));
    } else {
      out[i] = detail::dishonest_response(channel, keep, sigma, n, rng.substream(i));
    }
  });
  return out;
}

struct ReconstructedChannel {
  Superoperator linear_map;
  ChoiMatrix choi;
  std::uint64_t shots_per_input = 0;
  /// True when Choi eigenvalues had to be clipped.
  bool cp_projected = false;
};

/// Least-squares inversion of linear_map vec(rho_i) = vec(ratio_i state_i),
/// followed by clipping of negative Choi eigenvalues when they exceed 1e-8.
inline ReconstructedChannel reconstruct(const std::vector<ProverResponse>& responses,
                                        const TomographyDesign& design) {
  const std::size_t n = design.input_states.size();
  if (responses.size() != n) {
    throw Error(ErrorCode::kDimMismatch, "need exactly one response per design input");
  }
  const ComplexMatrix r = detail::design_matrix(design);
  const auto gram = detail::jacobi_eigensystem(hermitian_part(r.adjoint() * r));
  const double cutoff = tolerance::kGramRank * std::max(gram.max(), 0.0);
  const auto rank = std::count_if(gram.eigenvalues.begin(), gram.eigenvalues.end(),
                                  [&](double x) { return x > cutoff; });
  if (rank < 9) {
    throw Error(ErrorCode::kSingularDesign, "design Gram matrix has rank " + std::to_string(rank));
  }
  const ComplexMatrix gram_inv = gram.map([](double x) { return Complex{1.0 / x, 0.0}; });

  ComplexMatrix y(9, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& resp = responses[i];
    if (resp.returned_state.rows() != 3 || resp.returned_state.cols() != 3) {
      throw Error(ErrorCode::kDimMismatch, "returned states must be 3x3");
    }
    for (std::size_t k = 0; k < 9; ++k) y(k, i) = resp.success_ratio * resp.returned_state.data()[k];
  }

  ReconstructedChannel rc;
  rc.linear_map = Superoperator{y * gram_inv * r.adjoint(), 3, 3};
  rc.shots_per_input = responses.front().copies_returned;
  rc.choi = choi(rc.linear_map);
  rc.choi.matrix = hermitian_part(rc.choi.matrix);
  const auto es = detail::jacobi_eigensystem(rc.choi.matrix);
  if (es.min() < -tolerance::kChoiNegativity) {
    rc.choi.matrix = hermitian_part(es.map([](double x) { return Complex{std::max(x, 0.0), 0.0}; }));
    rc.linear_map = superoperator(rc.choi);
    rc.cp_projected = true;
  }
  return rc;
}

struct NormSearchOptions {
  /// Starting points: the computational basis states, then Haar-random states.
  int starts = 64;
  double gradient_tolerance = 1e-8;
  int max_iterations = 2000;
  std::uint64_t seed = 0x1d1f00d5ULL;
};

struct NormEstimate {
  double value = 0.0;
  std::vector<Complex> maximizer;
};

namespace detail {

inline double hermitian_trace_norm(const ComplexMatrix& y) {
  double s = 0.0;
  for (double x : jacobi_eigensystem(hermitian_part(y)).eigenvalues) s += std::abs(x);
  return s;
}

/// Phi^*(Y), defined by tr(Y Phi(X)) = tr(Phi^*(Y) X).
inline ComplexMatrix adjoint_map(const Superoperator& phi, const ComplexMatrix& y) {
  const std::size_t din = phi.dim_in;
  const std::size_t dout = phi.dim_out;
  ComplexMatrix a(din, din);
  for (std::size_t c = 0; c < din; ++c)
    for (std::size_t d = 0; d < din; ++d) {
      Complex s{};
      for (std::size_t i = 0; i < dout; ++i)
        for (std::size_t j = 0; j < dout; ++j) s += y(j, i) * phi.matrix(i * dout + j, c * din + d);
      a(d, c) = s;
    }
  return a;
}

/// Alternating maximization of tr(S Phi(psi psi^dagger)) over the sign
/// matrix S and the unit vector psi; f never decreases.
inline NormEstimate ascend(const Superoperator& phi, std::vector<Complex> psi,
                           const NormSearchOptions& options) {
  double value = 0.0;
  for (int it = 0; it < options.max_iterations; ++it) {
    const auto y = jacobi_eigensystem(hermitian_part(apply(phi, outer(psi, psi))));
    value = 0.0;
    double scale = 0.0;
    for (double x : y.eigenvalues) {
      value += std::abs(x);
      scale = std::max(scale, std::abs(x));
    }
    const ComplexMatrix sign = y.map([scale](double x) {
      if (std::abs(x) <= 1e-14 * scale) return Complex{};
      return Complex{x > 0.0 ? 1.0 : -1.0, 0.0};
    });
    const ComplexMatrix a = hermitian_part(adjoint_map(phi, sign));
    const auto a_psi = a * std::span<const Complex>(psi);
    const Complex rayleigh = inner(psi, a_psi);
    double grad = 0.0;
    for (std::size_t k = 0; k < psi.size(); ++k) grad += std::norm(a_psi[k] - rayleigh * psi[k]);
    if (std::sqrt(grad) <= options.gradient_tolerance) return {value, std::move(psi)};
    const auto es = jacobi_eigensystem(a);
    psi = column(es.eigenvectors, es.eigenvalues.size() - 1);
  }
  return {hermitian_trace_norm(apply(phi, outer(psi, psi))), std::move(psi)};
}

}  // namespace detail

/// max over pure states of ||Phi(|psi><psi|)||_tr for a Hermiticity-preserving Phi.
/// Because the basis states are among the starts, the result is never below
/// ||Phi(I/d)||_tr.
inline NormEstimate one_to_one_norm_search(const Superoperator& phi, const NormSearchOptions& options = {}) {
  if (phi.matrix.rows() != phi.dim_out * phi.dim_out || phi.matrix.cols() != phi.dim_in * phi.dim_in) {
    throw Error(ErrorCode::kDimMismatch, "superoperator shape does not match its dimensions");
  }
  const std::size_t d = phi.dim_in;
  const RngStream rng{options.seed, 0};
  NormEstimate best;
  for (int s = 0; s < options.starts; ++s) {
    std::vector<Complex> psi(d);
    if (static_cast<std::size_t>(s) < d) {
      psi[s] = 1.0;
    } else {
      double len = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const auto [re, im] = rng.gaussian_pair(static_cast<std::uint64_t>(s) * d + k);
        psi[k] = {re, im};
        len += std::norm(psi[k]);
      }
      for (auto& z : psi) z /= std::sqrt(len);
    }
    auto est = detail::ascend(phi, std::move(psi), options);
    if (best.maximizer.empty() || est.value > best.value) best = std::move(est);
  }
  return best;
}

inline double one_to_one_norm(const Superoperator& phi, const NormSearchOptions& options = {}) {
  return one_to_one_norm_search(phi, options).value;
}

/// ||Phi(I/d)||_tr
inline double maximally_mixed_lower_bound(const Superoperator& phi) {
  const ComplexMatrix mixed = ComplexMatrix::identity(phi.dim_in) / static_cast<double>(phi.dim_in);
  return detail::hermitian_trace_norm(apply(phi, mixed));
}

/// (lambda_1 - lambda_2) / 3 for a qubit metric with lambda_1 > lambda_2.
inline double threshold(const MetricOperator& eta) {
  if (eta.dim() != 2) throw Error(ErrorCode::kDimMismatch, "threshold needs a qubit metric");
  const double gap = eta.eigensystem().max() - eta.eigensystem().min();
  if (gap <= tolerance::kDegenerateMetric) {
    throw Error(ErrorCode::kDegenerateMetric, "eigenvalue gap " + std::to_string(gap));
  }
  return gap / 3.0;
}

enum class Verdict { kAccept, kReject };

constexpr std::string_view to_string(Verdict v) { return v == Verdict::kAccept ? "accept" : "reject"; }

struct VerificationReport {
  double distance = 0.0;
  double threshold = 0.0;
  Verdict verdict = Verdict::kReject;
  /// lambda_1 > lambda_2
  std::pair<double, double> eta_eigenvalues;
  std::uint64_t shots_per_input = 0;
  std::uint64_t seed = 0;
};

inline VerificationReport verify(const MetricOperator& eta, const ReconstructedChannel& recon,
                                 const NormSearchOptions& options = {}) {
  detail::require_subidentity(eta);
  const double th = threshold(eta);
  if (recon.linear_map.dim_in != 3 || recon.linear_map.dim_out != 3) {
    throw Error(ErrorCode::kDimMismatch, "reconstruction must act on the qutrit");
  }
  const Superoperator diff = superoperator(honest_channel(eta)) - recon.linear_map;
  VerificationReport rep;
  rep.distance = one_to_one_norm(diff, options);
  rep.threshold = th;
  rep.verdict = rep.distance <= th ? Verdict::kAccept : Verdict::kReject;
  rep.eta_eigenvalues = {eta.eigensystem().max(), eta.eigensystem().min()};
  rep.shots_per_input = recon.shots_per_input;
  return rep;
}

}  // namespace metriq

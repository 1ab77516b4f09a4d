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
 * Kraus channels, their Choi and superoperator forms, and the channels that
 * realize a change of inner product:
 *
 *   G_eta(M)    = eta^{1/2} M eta^{1/2}          (single Kraus operator)
 *   E_eta(M)    = M eta = R_eta(G_eta(M))        (matrix map, not a KrausChannel)
 *   G_{k eta^-1} with Kraus sqrt(k) eta^{-1/2},  k = 1/||eta^{-1}||
 *
 * so that G_{k eta^-1} o G_eta = k * identity.
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "metriq/errors.hpp"
#include "metriq/hilbert.hpp"
#include "metriq/linalg.hpp"

namespace metriq {

namespace tolerance {
/// Absolute slack on the eigenvalues of I - sum K^dagger K.
inline constexpr double kTraceNonincreasing = 1e-10;
}  // namespace tolerance

/// rho -> sum_k K_k rho K_k^dagger with every K_k of shape dim_out x dim_in.
class KrausChannel {
 public:
  KrausChannel(std::vector<ComplexMatrix> kraus_ops, std::size_t dim_in, std::size_t dim_out)
      : kraus_(std::move(kraus_ops)), dim_in_(dim_in), dim_out_(dim_out) {
    if (dim_in_ == 0 || dim_out_ == 0) {
      throw Error(ErrorCode::kInvalidArgument, "channel dimensions must be positive");
    }
    for (const auto& k : kraus_) {
      if (k.rows() != dim_out_ || k.cols() != dim_in_) {
        throw Error(ErrorCode::kDimMismatch, "Kraus operator shape does not match channel");
      }
      if (!k.is_finite()) throw Error(ErrorCode::kInvalidArgument, "non-finite Kraus operator");
    }
  }

  static KrausChannel identity(std::size_t dim) {
    return KrausChannel({ComplexMatrix::identity(dim)}, dim, dim);
  }

  static KrausChannel unitary(const ComplexMatrix& u) {
    require_square(u, "unitary");
    return KrausChannel({u}, u.rows(), u.rows());
  }

  const std::vector<ComplexMatrix>& kraus_ops() const noexcept { return kraus_; }
  std::size_t dim_in() const noexcept { return dim_in_; }
  std::size_t dim_out() const noexcept { return dim_out_; }

 private:
  std::vector<ComplexMatrix> kraus_;
  std::size_t dim_in_;
  std::size_t dim_out_;
};

struct ChoiMatrix {
  /// sum_ij |i><j| (x) Phi(|i><j|), of size (dim_in*dim_out)^2.
  ComplexMatrix matrix;
  std::size_t dim_in = 0;
  std::size_t dim_out = 0;
};

/// Row-major vectorization: vec(X)[i*dim + j] = X(i, j), so that
/// vec(A X B) = (A (x) B^T) vec(X).
struct Superoperator {
  ComplexMatrix matrix;
  std::size_t dim_in = 0;
  std::size_t dim_out = 0;
};

inline ComplexMatrix apply(const KrausChannel& ch, const ComplexMatrix& rho) {
  if (rho.rows() != ch.dim_in() || rho.cols() != ch.dim_in()) {
    throw Error(ErrorCode::kDimMismatch, "channel input dimension mismatch");
  }
  ComplexMatrix out(ch.dim_out(), ch.dim_out());
  for (const auto& k : ch.kraus_ops()) out += k * rho * k.adjoint();
  return out;
}

/// outer o inner, keeping every pairwise Kraus product.
inline KrausChannel compose(const KrausChannel& outer_ch, const KrausChannel& inner_ch) {
  if (inner_ch.dim_out() != outer_ch.dim_in()) {
    throw Error(ErrorCode::kDimMismatch, "compose: inner output does not feed outer input");
  }
  std::vector<ComplexMatrix> ops;
  ops.reserve(outer_ch.kraus_ops().size() * inner_ch.kraus_ops().size());
  for (const auto& a : outer_ch.kraus_ops())
    for (const auto& b : inner_ch.kraus_ops()) ops.push_back(a * b);
  return KrausChannel(std::move(ops), inner_ch.dim_in(), outer_ch.dim_out());
}

inline ComplexMatrix kraus_sum(const KrausChannel& ch) {
  ComplexMatrix s(ch.dim_in(), ch.dim_in());
  for (const auto& k : ch.kraus_ops()) s += k.adjoint() * k;
  return s;
}

inline bool is_trace_nonincreasing(const KrausChannel& ch) {
  const ComplexMatrix slack = ComplexMatrix::identity(ch.dim_in()) - kraus_sum(ch);
  return detail::jacobi_eigensystem(hermitian_part(slack)).min() >= -tolerance::kTraceNonincreasing;
}

inline ChoiMatrix choi(const KrausChannel& ch) {
  const std::size_t din = ch.dim_in();
  const std::size_t dout = ch.dim_out();
  ChoiMatrix c{ComplexMatrix(din * dout, din * dout), din, dout};
  for (std::size_t i = 0; i < din; ++i) {
    for (std::size_t j = 0; j < din; ++j) {
      ComplexMatrix eij(din, din);
      eij(i, j) = 1.0;
      const ComplexMatrix out = apply(ch, eij);
      for (std::size_t a = 0; a < dout; ++a)
        for (std::size_t b = 0; b < dout; ++b) c.matrix(i * dout + a, j * dout + b) = out(a, b);
    }
  }
  return c;
}

inline bool is_completely_positive(const ChoiMatrix& c, double tol = 1e-10) {
  if (!is_hermitian(c.matrix)) return false;
  return detail::jacobi_eigensystem(hermitian_part(c.matrix)).min() >= -tol;
}

inline Superoperator superoperator(const KrausChannel& ch) {
  Superoperator s{ComplexMatrix(ch.dim_out() * ch.dim_out(), ch.dim_in() * ch.dim_in()),
                  ch.dim_in(), ch.dim_out()};
  for (const auto& k : ch.kraus_ops()) s.matrix += kron(k, k.conjugate());
  return s;
}

inline ComplexMatrix apply(const Superoperator& s, const ComplexMatrix& x) {
  if (x.rows() != s.dim_in || x.cols() != s.dim_in) {
    throw Error(ErrorCode::kDimMismatch, "superoperator input dimension mismatch");
  }
  const auto y = s.matrix * x.data();
  ComplexMatrix out(s.dim_out, s.dim_out);
  std::copy(y.begin(), y.end(), out.data().begin());
  return out;
}

inline Superoperator operator-(const Superoperator& a, const Superoperator& b) {
  if (a.dim_in != b.dim_in || a.dim_out != b.dim_out) {
    throw Error(ErrorCode::kDimMismatch, "superoperator difference shape mismatch");
  }
  return {a.matrix - b.matrix, a.dim_in, a.dim_out};
}

inline Superoperator operator+(const Superoperator& a, const Superoperator& b) {
  if (a.dim_in != b.dim_in || a.dim_out != b.dim_out) {
    throw Error(ErrorCode::kDimMismatch, "superoperator sum shape mismatch");
  }
  return {a.matrix + b.matrix, a.dim_in, a.dim_out};
}

inline ChoiMatrix choi(const Superoperator& s) {
  const std::size_t din = s.dim_in;
  const std::size_t dout = s.dim_out;
  ChoiMatrix c{ComplexMatrix(din * dout, din * dout), din, dout};
  for (std::size_t i = 0; i < din; ++i)
    for (std::size_t j = 0; j < din; ++j)
      for (std::size_t a = 0; a < dout; ++a)
        for (std::size_t b = 0; b < dout; ++b)
          c.matrix(i * dout + a, j * dout + b) = s.matrix(a * dout + b, i * din + j);
  return c;
}

inline Superoperator superoperator(const ChoiMatrix& c) {
  const std::size_t din = c.dim_in;
  const std::size_t dout = c.dim_out;
  Superoperator s{ComplexMatrix(dout * dout, din * din), din, dout};
  for (std::size_t i = 0; i < din; ++i)
    for (std::size_t j = 0; j < din; ++j)
      for (std::size_t a = 0; a < dout; ++a)
        for (std::size_t b = 0; b < dout; ++b)
          s.matrix(a * dout + b, i * din + j) = c.matrix(i * dout + a, j * dout + b);
  return s;
}

namespace detail {
inline void require_subidentity(const MetricOperator& eta) {
  if (!eta.subidentity()) {
    throw Error(ErrorCode::kMetricExceedsIdentity,
                "||eta|| = " + std::to_string(eta.norm()) + " exceeds 1");
  }
}
}  // namespace detail

/// G_eta: single Kraus operator eta^{1/2}.
inline KrausChannel g_eta(const MetricOperator& eta) {
  detail::require_subidentity(eta);
  return KrausChannel({eta.sqrt()}, eta.dim(), eta.dim());
}

/// E_eta(M) = M eta.
inline ComplexMatrix apply_e_eta(const MetricOperator& eta, const ComplexMatrix& m) {
  detail::require_subidentity(eta);
  require_square(m, "apply_e_eta operand");
  detail::require_dim(eta.dim(), m.rows(), "apply_e_eta");
  return m * eta.matrix();
}

struct ScaledMetric {
  double kappa;
  MetricOperator scaled;
};

/// kappa = min(1, 1/||eta||) and kappa * eta, which is always <= I.
inline ScaledMetric scaled_metric(const MetricOperator& eta) {
  if (eta.subidentity()) return {1.0, eta};
  const double kappa = 1.0 / eta.norm();
  return {kappa, validate_metric(eta.matrix() * kappa)};
}

struct ScaledReversal {
  double kappa;
  KrausChannel channel;
};

/// G_{kappa eta^{-1}} with kappa = 1/||eta^{-1}||: undoes G_eta with probability kappa.
inline ScaledReversal g_kappa_eta_inv(const MetricOperator& eta) {
  const double kappa = eta.eigensystem().min();
  return {kappa, KrausChannel({eta.inv_sqrt() * std::sqrt(kappa)}, eta.dim(), eta.dim())};
}

}  // namespace metriq

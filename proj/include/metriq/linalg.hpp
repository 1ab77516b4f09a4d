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
 * Small dense complex matrices (dimension up to 9) and the spectral kernels
 * the rest of the library is built on: a cyclic Jacobi eigensolver for
 * Hermitian matrices and a one-sided Jacobi routine for singular values.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "metriq/errors.hpp"

namespace metriq {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

namespace tolerance {
/// Relative Hermiticity tolerance on ||M - M^dagger||_op.
inline constexpr double kHermitian = 1e-10;
/// Eigenvalues below this are treated as negative by psd_sqrt.
inline constexpr double kPsd = 1e-10;
}  // namespace tolerance

/// Dense row-major complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Complex{}) {}

  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) {
        throw Error(ErrorCode::kDimMismatch, "ragged initializer list");
      }
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) {
    return ComplexMatrix(rows, cols);
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
  }

  static ComplexMatrix diagonal(std::initializer_list<double> values) {
    return diagonal(std::span<const double>(values.begin(), values.size()));
  }

  static ComplexMatrix diagonal(std::span<const Complex> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<Complex> data() noexcept { return data_; }
  std::span<const Complex> data() const noexcept { return data_; }

  ComplexMatrix adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
  }

  ComplexMatrix transpose() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  ComplexMatrix conjugate() const {
    ComplexMatrix out = *this;
    for (auto& z : out.data_) z = std::conj(z);
    return out;
  }

  Complex trace() const {
    Complex t{};
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  bool is_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
      return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
  }

  ComplexMatrix& operator+=(const ComplexMatrix& other) {
    require_same_shape(other);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
    return *this;
  }

  ComplexMatrix& operator-=(const ComplexMatrix& other) {
    require_same_shape(other);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
    return *this;
  }

  ComplexMatrix& operator*=(Complex scalar) {
    for (auto& z : data_) z *= scalar;
    return *this;
  }

  ComplexMatrix& operator/=(Complex scalar) {
    for (auto& z : data_) z /= scalar;
    return *this;
  }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  void require_same_shape(const ComplexMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
      throw Error(ErrorCode::kDimMismatch,
                  "shape " + std::to_string(rows_) + "x" + std::to_string(cols_) + " vs " +
                      std::to_string(other.rows_) + "x" + std::to_string(other.cols_));
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

inline ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
inline ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
inline ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
inline ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
inline ComplexMatrix operator/(ComplexMatrix a, Complex s) { return a /= s; }
inline ComplexMatrix operator-(ComplexMatrix a) { return a *= -1.0; }

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::kDimMismatch, "matrix product inner dimensions differ");
  }
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

/// Matrix-vector product.
inline std::vector<Complex> operator*(const ComplexMatrix& a, std::span<const Complex> v) {
  if (a.cols() != v.size()) {
    throw Error(ErrorCode::kDimMismatch, "matrix-vector dimensions differ");
  }
  std::vector<Complex> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out[i] += a(i, j) * v[j];
  return out;
}

inline void require_square(const ComplexMatrix& m, const char* what) {
  if (!m.is_square() || m.empty()) {
    throw Error(ErrorCode::kNotSquare, std::string(what) + " must be a non-empty square matrix");
  }
}

inline double frobenius_norm(const ComplexMatrix& m) {
  double s = 0.0;
  for (const auto& z : m.data()) s += std::norm(z);
  return std::sqrt(s);
}

/// Largest entry-wise modulus of a - b.
inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::kDimMismatch, "max_abs_diff shape mismatch");
  }
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a.data()[k] - b.data()[k]));
  return d;
}

/// |a><b|
inline ComplexMatrix outer(std::span<const Complex> a, std::span<const Complex> b) {
  ComplexMatrix out(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out(i, j) = a[i] * std::conj(b[j]);
  return out;
}

inline Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kDimMismatch, "inner product length mismatch");
  Complex s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

/// Block-diagonal a (+) b.
inline ComplexMatrix direct_sum(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) out(a.rows() + i, a.cols() + j) = b(i, j);
  return out;
}

inline ComplexMatrix block(const ComplexMatrix& m, std::size_t row0, std::size_t col0,
                           std::size_t rows, std::size_t cols) {
  if (row0 + rows > m.rows() || col0 + cols > m.cols()) {
    throw Error(ErrorCode::kDimMismatch, "block out of range");
  }
  ComplexMatrix out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) out(i, j) = m(row0 + i, col0 + j);
  return out;
}

inline std::vector<Complex> column(const ComplexMatrix& m, std::size_t j) {
  std::vector<Complex> c(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) c[i] = m(i, j);
  return c;
}

/// (M + M^dagger) / 2
inline ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  require_square(m, "hermitian_part input");
  return (m + m.adjoint()) * 0.5;
}

struct HermitianEigensystem {
  /// Ascending.
  std::vector<double> eigenvalues;
  /// Column k is the unit eigenvector for eigenvalues[k].
  ComplexMatrix eigenvectors;

  /// V f(diag(lambda)) V^dagger.
  ComplexMatrix map(const std::function<Complex(double)>& f) const {
    const std::size_t n = eigenvalues.size();
    ComplexMatrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
      const Complex fk = f(eigenvalues[k]);
      if (fk == Complex{}) continue;
      for (std::size_t i = 0; i < n; ++i) {
        const Complex vik = eigenvectors(i, k) * fk;
        for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(eigenvectors(j, k));
      }
    }
    return out;
  }

  ComplexMatrix reconstruct() const {
    return map([](double x) { return Complex{x, 0.0}; });
  }

  double min() const { return eigenvalues.front(); }
  double max() const { return eigenvalues.back(); }
};

namespace detail {

/// Cyclic-by-row Jacobi on a matrix assumed Hermitian. Eigenvalues come
/// back ascending, eigenvectors phase-fixed so that their first component
/// with modulus above 1e-8 is real positive.
inline HermitianEigensystem jacobi_eigensystem(ComplexMatrix a) {
  const std::size_t n = a.rows();
  ComplexMatrix v = ComplexMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();

  const double scale = frobenius_norm(a);
  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps && scale > 0.0; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= 1e-17 * scale) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag == 0.0) continue;
        const Complex phase = a(p, q) / mag;  // e^{i alpha}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // Rotation V = diag(1, e^{-i alpha}) * [[c, s], [-s, c]] on (p, q).
        const Complex sp = s * std::conj(phase);
        const Complex cp = c * std::conj(phase);
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = c * akp - sp * akq;
          a(k, q) = s * akp + cp * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = c * apk - std::conj(sp) * aqk;
          a(q, k) = s * apk + std::conj(cp) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = app - t * mag;
        a(q, q) = aqq + t * mag;
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = c * vkp - sp * vkq;
          v(k, q) = s * vkp + cp * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() < a(j, j).real();
  });

  HermitianEigensystem es;
  es.eigenvalues.resize(n);
  es.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    es.eigenvalues[k] = a(src, src).real();
    Complex fix{1.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      const double mag = std::abs(v(i, src));
      if (mag > 1e-8) {
        fix = std::conj(v(i, src)) / mag;
        break;
      }
    }
    for (std::size_t i = 0; i < n; ++i) es.eigenvectors(i, k) = v(i, src) * fix;
  }
  return es;
}

/// One-sided (Hestenes) Jacobi: singular values, descending.
inline std::vector<double> singular_values(const ComplexMatrix& m) {
  ComplexMatrix u = m.rows() >= m.cols() ? m : m.adjoint();
  const std::size_t rows = u.rows();
  const std::size_t cols = u.cols();
  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i < cols; ++i) {
      for (std::size_t j = i + 1; j < cols; ++j) {
        double alpha = 0.0;
        double beta = 0.0;
        Complex gamma{};
        for (std::size_t k = 0; k < rows; ++k) {
          alpha += std::norm(u(k, i));
          beta += std::norm(u(k, j));
          gamma += std::conj(u(k, i)) * u(k, j);
        }
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= 1e-16 * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const Complex phase = std::conj(gamma) / g;  // e^{-i phi}
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t k = 0; k < rows; ++k) {
          const Complex ui = u(k, i);
          const Complex uj = u(k, j) * phase;
          u(k, i) = c * ui - s * uj;
          u(k, j) = s * ui + c * uj;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> sv(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < rows; ++k) s += std::norm(u(k, j));
    sv[j] = std::sqrt(s);
  }
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

}  // namespace detail

/// Largest singular value.
inline double operator_norm(const ComplexMatrix& m) {
  if (m.empty()) return 0.0;
  return detail::singular_values(m).front();
}

/// Sum of singular values.
inline double trace_norm(const ComplexMatrix& m) {
  require_square(m, "trace_norm input");
  const auto sv = detail::singular_values(m);
  return std::accumulate(sv.begin(), sv.end(), 0.0);
}

/// ||M - M^dagger||_op <= 1e-10 * max(1, ||M||_op)
inline bool is_hermitian(const ComplexMatrix& m, double rel_tol = tolerance::kHermitian) {
  if (!m.is_square()) return false;
  const double skew = operator_norm(m - m.adjoint());
  return skew <= rel_tol * std::max(1.0, operator_norm(m));
}

inline HermitianEigensystem hermitian_eig(const ComplexMatrix& m) {
  require_square(m, "hermitian_eig input");
  if (!is_hermitian(m)) {
    throw Error(ErrorCode::kNotHermitian, "hermitian_eig input is not Hermitian");
  }
  return detail::jacobi_eigensystem(hermitian_part(m));
}

/// Positive square root of a PSD matrix; eigenvalues in [-1e-10, 0) are clipped.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  const auto es = hermitian_eig(m);
  if (es.min() < -tolerance::kPsd) {
    throw Error(ErrorCode::kNotPsd, "min eigenvalue " + std::to_string(es.min()));
  }
  return hermitian_part(es.map([](double x) { return Complex{std::sqrt(std::max(x, 0.0)), 0.0}; }));
}

/// exp(-i H t) for Hermitian H, via its spectral decomposition.
inline ComplexMatrix matrix_exp_hermitian_generator(const ComplexMatrix& h, double t) {
  const auto es = hermitian_eig(h);
  return es.map([t](double x) { return std::exp(Complex{0.0, -x * t}); });
}

}  // namespace metriq

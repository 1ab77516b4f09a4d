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


#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "metriq/ptsym.hpp"
#include "test_support.hpp"

namespace metriq {
namespace {

constexpr double kPi = std::numbers::pi;

PtSystem paper_system() { return build_pt_system({1.0, 2.0, kPi / 6}); }

std::vector<PtHamiltonian> sweep() {
  std::vector<PtHamiltonian> out;
  for (double r : {0.0, 0.5, 1.0})
    for (double s : {1.0, 2.0})
      for (double phi : {0.0, kPi / 6, kPi / 3})
        if (s > r * std::sin(phi)) out.push_back({r, s, phi});
  return out;
}

/// Eigenvalues of a general 2x2 matrix from its characteristic polynomial.
std::pair<Complex, Complex> eigenvalues2(const ComplexMatrix& m) {
  const Complex tr = m.trace();
  const Complex det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const Complex disc = std::sqrt(tr * tr - 4.0 * det);
  return {(tr + disc) / 2.0, (tr - disc) / 2.0};
}

TEST(BuildPtSystem, HermitianLimit) {
  const auto sys = build_pt_system({0.0, 1.5, 0.7});
  EXPECT_LE(max_abs_diff(sys.h_matrix, ComplexMatrix{{0.0, 1.5}, {1.5, 0.0}}), 1e-15);
  EXPECT_LE(max_abs_diff(sys.eta2.matrix(), ComplexMatrix::identity(2)), 1e-15);
  EXPECT_DOUBLE_EQ(sys.kappa, 1.0);
}

TEST(BuildPtSystem, PaperParameters) {
  const auto sys = paper_system();
  EXPECT_LE(max_abs_diff(sys.eta2.matrix(), ComplexMatrix{{0.8, -0.2 * kI}, {0.2 * kI, 0.8}}), 1e-15);
  EXPECT_NEAR(sys.eta2.norm(), 1.0, 1e-14);
  EXPECT_NEAR(sys.kappa, 0.6, 1e-15);
  const double c = std::cos(kPi / 6);
  const double w = std::sqrt(3.75);
  EXPECT_LE(max_abs_diff(sys.h_pt_hermitian, ComplexMatrix{{c, w}, {w, c}}), 1e-12);
}

TEST(BuildPtSystem, Errors) {
  auto code = [](PtHamiltonian p) {
    try {
      build_pt_system(p);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInvalidArgument;
  };
  EXPECT_EQ(code({1.0, 0.4, kPi / 6}), ErrorCode::kBrokenPtRegime);
  EXPECT_EQ(code({1.0, 0.5, kPi / 6}), ErrorCode::kBrokenPtRegime);
  EXPECT_EQ(code({-1.0, 2.0, kPi / 6}), ErrorCode::kNegativeParameters);
  EXPECT_EQ(code({1.0, 0.0, 0.0}), ErrorCode::kNegativeParameters);
  EXPECT_EQ(code({1.0, 2.0, -kPi / 6}), ErrorCode::kNegativeParameters);
}

TEST(BuildPtSystem, QuasiHermiticityAndHermitization) {
  for (const auto& p : sweep()) {
    const auto sys = build_pt_system(p);
    const ComplexMatrix& h = sys.h_matrix;
    EXPECT_LE(operator_norm(h.adjoint() - sys.eta2.matrix() * h * sys.eta2_inv.matrix()), 1e-10);
    EXPECT_LE(operator_norm(sys.h_pt_hermitian - sys.h_pt_hermitian.adjoint()), 1e-10);
    EXPECT_LE(max_abs_diff(sys.eta2.matrix() * sys.eta2_inv.matrix(), ComplexMatrix::identity(2)), 1e-14);
    const auto [e1, e2] = eigenvalues2(h);
    EXPECT_LE(std::abs(e1.imag()), 1e-10);
    EXPECT_LE(std::abs(e2.imag()), 1e-10);
  }
}

TEST(BuildPtSystem, GapClosesAtExceptionalPoint) {
  const double r = 1.0;
  const double phi = kPi / 3;
  const double eps = 1e-3;
  const auto sys = build_pt_system({r, r * std::sin(phi) + eps, phi});
  const auto [e1, e2] = eigenvalues2(sys.h_matrix);
  // gap = 2 sqrt(s^2 - r^2 sin^2 phi), about 2 sqrt(2 eps r sin phi)
  EXPECT_LE(std::abs(e1 - e2), 0.1);
  EXPECT_NEAR(std::abs(e1 - e2), 2.0 * std::sqrt(eps * (2.0 * r * std::sin(phi) + eps)), 1e-9);
}

TEST(UPt, Examples) {
  const auto sys = paper_system();
  EXPECT_LE(max_abs_diff(u_pt(sys, 0.0), ComplexMatrix::identity(2)), 1e-15);
  const auto herm = build_pt_system({0.0, 1.3, 0.4});
  for (double t : {0.3, 1.0, 7.0}) {
    const ComplexMatrix u = u_pt(herm, t);
    EXPECT_LE(max_abs_diff(u.adjoint() * u, ComplexMatrix::identity(2)), 1e-13);
  }
  // Eigenvalues of U(1) are exp(-i E) with E real eigenvalues of H.
  const double c = std::cos(kPi / 6);
  const double w = std::sqrt(3.75);
  const auto [z1, z2] = eigenvalues2(u_pt(sys, 1.0));
  const Complex a = std::exp(-kI * (c + w));
  const Complex b = std::exp(-kI * (c - w));
  const double err = std::min(std::abs(z1 - a) + std::abs(z2 - b), std::abs(z1 - b) + std::abs(z2 - a));
  EXPECT_LE(err, 1e-12);
}

TEST(UPt, MatchesSeriesNearZero) {
  const auto sys = paper_system();
  for (double t : {1e-9, 1e-6, 2e-5}) {
    // second-order Taylor: I - i H t - H^2 t^2 / 2
    const ComplexMatrix& h = sys.h_matrix;
    const ComplexMatrix taylor = ComplexMatrix::identity(2) - h * (kI * t) - h * h * (t * t / 2.0);
    EXPECT_LE(max_abs_diff(u_pt(sys, t), taylor), 1e-12);
  }
}

TEST(UPt, SemigroupProperty) {
  const auto sys = paper_system();
  EXPECT_LE(max_abs_diff(u_pt(sys, 0.7) * u_pt(sys, 1.6), u_pt(sys, 2.3)), 1e-12);
}

TEST(UPt, IntertwinesWithHermitianPartner) {
  for (const auto& p : sweep()) {
    const auto sys = build_pt_system(p);
    for (double t : {0.1, 1.0, 5.0}) {
      const ComplexMatrix lhs = matrix_exp_hermitian_generator(sys.h_pt_hermitian, t);
      const ComplexMatrix rhs = sys.eta2.sqrt() * u_pt(sys, t) * sys.eta2.inv_sqrt();
      EXPECT_LE(max_abs_diff(lhs, rhs), 1e-10);
    }
  }
}

TEST(AnalyticEvolution, Examples) {
  const auto sys = paper_system();
  testing::Random rng(51);
  const ComplexMatrix pure = rng.pure_density(2);
  const auto at0 = analytic_pt_evolution(sys, pure, 0.0);
  EXPECT_LE(max_abs_diff(at0.state, pure), 1e-14);
  EXPECT_NEAR(at0.probability, 0.6, 1e-14);

  const auto herm = build_pt_system({0.0, 1.0, 0.0});
  const auto out = analytic_pt_evolution(herm, pure, 0.8);
  const ComplexMatrix u = u_pt(herm, 0.8);
  EXPECT_LE(max_abs_diff(out.state, u * pure * u.adjoint()), 1e-14);
  EXPECT_NEAR(out.probability, 1.0, 1e-14);

  const ComplexMatrix rho0 = ComplexMatrix::diagonal({1.0, 0.0});
  const ComplexMatrix u1 = u_pt(sys, 1.0);
  EXPECT_NEAR(analytic_pt_evolution(sys, rho0, 1.0).probability,
              0.6 * (u1 * rho0 * u1.adjoint()).trace().real(), 1e-14);
}

TEST(AnalyticEvolution, AgreesWithThreeChannelFactorization) {
  const auto sys = paper_system();
  testing::Random rng(52);
  for (int trial = 0; trial < 100; ++trial) {
    const ComplexMatrix rho = rng.density(2);
    const double t = rng.uniform(0.0, 6.0);
    const auto ev = analytic_pt_evolution(sys, rho, t);
    const ComplexMatrix channel_out = apply(pt_channel(sys, t), rho);
    EXPECT_LE(max_abs_diff(channel_out, ev.state * ev.probability), 1e-10);
  }
}

}  // namespace
}  // namespace metriq

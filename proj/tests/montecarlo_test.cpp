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
#include <numbers>

#include <gtest/gtest.h>

#include "metriq/montecarlo.hpp"
#include "test_support.hpp"

namespace metriq {
namespace {

ComplexMatrix eta2_matrix() { return {{0.8, -0.2 * kI}, {0.2 * kI, 0.8}}; }
const ComplexMatrix kRho0 = ComplexMatrix::diagonal({1.0, 0.0});

/// Standard deviation of N / copies for a per-copy success probability p.
double ratio_sigma(double p, std::uint64_t n) { return p * std::sqrt((1.0 - p) / static_cast<double>(n)); }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInvalidArgument;
}

TEST(RngStreamTest, DeterministicAndDistinct) {
  const RngStream a{3, 4};
  EXPECT_EQ(a.bits(17), (RngStream{3, 4}.bits(17)));
  EXPECT_NE(a.bits(17), (RngStream{3, 5}.bits(17)));
  EXPECT_NE(a.bits(17), (RngStream{2, 4}.bits(17)));
  EXPECT_NE(a.substream(0), a.substream(1));
  double mean = 0.0;
  for (std::uint64_t k = 0; k < 100000; ++k) {
    const double u = a.uniform(k);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    mean += u;
  }
  EXPECT_NEAR(mean / 100000, 0.5, 5.0 * std::sqrt(1.0 / 12.0 / 100000));
}

TEST(SimulateGEta, IdentityAlwaysSucceeds) {
  testing::Random rng(71);
  const auto rec = simulate_g_eta(validate_metric(ComplexMatrix::identity(2)), rng.density(2), 1000, {1, 0});
  EXPECT_EQ(rec.total_copies_used, 1000u);
  EXPECT_DOUBLE_EQ(rec.success_ratio, 1.0);
}

TEST(SimulateGEta, Eta2OnGroundState) {
  const std::uint64_t n = 100000;
  const auto rec = simulate_g_eta(validate_metric(eta2_matrix()), kRho0, n, {7, 0});
  EXPECT_EQ(rec.requested_successes, n);
  EXPECT_GE(rec.total_copies_used, n);
  const double sigma = std::sqrt(0.8 * 0.2 / static_cast<double>(rec.total_copies_used));
  EXPECT_LE(std::abs(rec.success_ratio - 0.8), 3.0 * sigma);
  EXPECT_LE(max_abs_diff(rec.output_state, embed(apply(g_eta(validate_metric(eta2_matrix())), kRho0)) / 0.8),
            1e-12);
  EXPECT_NEAR(rec.output_state.trace().real(), 1.0, 1e-10);
}

TEST(SimulateGEta, DiagonalMetric) {
  const std::uint64_t n = 100000;
  const auto rec = simulate_g_eta(validate_metric(ComplexMatrix::diagonal({1.0, 0.25})),
                                  ComplexMatrix::diagonal({0.0, 1.0}), n, {5, 2});
  EXPECT_LE(std::abs(rec.success_ratio - 0.25), 4.0 * ratio_sigma(0.25, n));
  EXPECT_LE(max_abs_diff(rec.qubit_state(), ComplexMatrix::diagonal({0.0, 1.0})), 1e-12);
}

TEST(SimulateGEta, NonNormalizedMetricIsRescaled) {
  const std::uint64_t n = 100000;
  const auto eta = validate_metric(eta2_matrix() * 0.5);
  const auto rec = simulate_g_eta(eta, kRho0, n, {9, 0});
  // ||eta|| N / copies estimates tr(G_eta(rho)) = 0.4; per-copy success is 0.8
  EXPECT_LE(std::abs(rec.success_ratio - 0.4), 4.0 * 0.5 * ratio_sigma(0.8, n));
}

TEST(SimulateGEta, QutritInputs) {
  const auto eta = validate_metric(eta2_matrix());
  const ComplexMatrix sigma = ComplexMatrix::diagonal({0.5, 0.0, 0.5});
  const std::uint64_t n = 50000;
  const auto rec = simulate_g_eta(eta, sigma, n, {4, 0});
  EXPECT_LE(std::abs(rec.success_ratio - 0.4), 4.0 * ratio_sigma(0.4, n));
  EXPECT_LE(max_abs_diff(rec.output_state, embed(apply(g_eta(eta), kRho0)) / 0.8), 1e-12);
  EXPECT_EQ(code_of([&] { simulate_g_eta(eta, ComplexMatrix::diagonal({0.0, 0.0, 1.0}), 10, {1, 0}); }),
            ErrorCode::kVanishingSuccessProbability);
}

TEST(SimulateGEta, Errors) {
  const auto eta = validate_metric(eta2_matrix());
  EXPECT_EQ(code_of([&] { simulate_g_eta(eta, kRho0, 0, {1, 0}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([&] { simulate_g_eta(eta, ComplexMatrix::identity(2), 10, {1, 0}); }),
            ErrorCode::kInvalidDensityOperator);
  EXPECT_EQ(code_of([&] { simulate_g_eta(validate_metric(ComplexMatrix::diagonal({2.0, 1.0})), kRho0, 10, {1, 0}); }),
            ErrorCode::kMetricExceedsIdentity);
}

TEST(SimulateGEta, Deterministic) {
  testing::Random rng(72);
  const auto eta = validate_metric(rng.subidentity_metric_matrix());
  const ComplexMatrix rho = rng.density(2);
  const auto a = simulate_g_eta(eta, rho, 5000, {42, 3});
  const auto b = simulate_g_eta(eta, rho, 5000, {42, 3});
  EXPECT_EQ(a, b);
  EXPECT_NE(a.total_copies_used, simulate_g_eta(eta, rho, 5000, {43, 3}).total_copies_used);
}

TEST(SimulateGEta, CopyAccountingMatchesDraws) {
  // Recount the successes from the raw stream with the analytic probability.
  const auto eta = validate_metric(eta2_matrix());
  const RngStream rng{123, 9};
  const auto rec = simulate_g_eta(eta, kRho0, 2000, rng);
  std::uint64_t successes = 0;
  for (std::uint64_t k = 0; k < rec.total_copies_used; ++k) successes += rng.uniform(k) < 0.8 ? 1 : 0;
  EXPECT_EQ(successes, 2000u);
  EXPECT_LT(rng.uniform(rec.total_copies_used - 1), 0.8);
}

TEST(SimulateGEta, EstimatorConsistencyOverSeeds) {
  testing::Random rng(73);
  const auto eta = validate_metric(rng.subidentity_metric_matrix());
  const ComplexMatrix rho = rng.density(2);
  const double p = apply(g_eta(eta), rho).trace().real();
  const double scale = eta.norm();
  const std::uint64_t n = 10000;
  double mean = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) mean += simulate_g_eta(eta, rho, n, {seed, 0}).success_ratio;
  mean /= 20.0;
  const double per_copy = p / scale;
  EXPECT_LE(std::abs(mean - p), 4.0 * scale * ratio_sigma(per_copy, n) / std::sqrt(20.0));
}

const PtSystem& paper_system() {
  static const PtSystem sys = build_pt_system({1.0, 2.0, std::numbers::pi / 6});
  return sys;
}

TEST(ChainedProbability, Examples) {
  EXPECT_NEAR(chained_success_probability(paper_system(), kRho0, 0.0), 0.6, 1e-14);
  const auto herm = build_pt_system({0.0, 2.0, 0.0});
  EXPECT_NEAR(chained_success_probability(herm, kRho0, 3.0), 1.0, 1e-14);
  const auto ev = analytic_pt_evolution(paper_system(), kRho0, 1.0);
  EXPECT_NEAR(chained_success_probability(paper_system(), kRho0, 1.0), ev.probability, 1e-14);
}

TEST(SimulatePt, TimeZero) {
  const std::uint64_t n = 100000;
  const auto rec = simulate_pt(paper_system(), kRho0, 0.0, n, {7, 0});
  EXPECT_LE(max_abs_diff(rec.output_state, ComplexMatrix::diagonal({1.0, 0.0, 0.0})), 1e-12);
  EXPECT_LE(std::abs(rec.success_ratio - 0.6), 4.0 * ratio_sigma(0.6, n));
}

TEST(SimulatePt, HermitianLimit) {
  const auto sys = build_pt_system({0.0, 1.0, 0.0});
  testing::Random rng(74);
  const ComplexMatrix rho = rng.density(2);
  const auto rec = simulate_pt(sys, rho, 2.0, 1000, {1, 1});
  EXPECT_EQ(rec.total_copies_used, 1000u);
  EXPECT_DOUBLE_EQ(rec.success_ratio, 1.0);
  const ComplexMatrix u = u_pt(sys, 2.0);
  EXPECT_LE(max_abs_diff(rec.qubit_state(), u * rho * u.adjoint()), 1e-12);
}

TEST(SimulatePt, MatchesAnalyticEvolution) {
  const std::uint64_t n = 100000;
  for (double t : {0.5, 1.0, 3.0}) {
    const auto rec = simulate_pt(paper_system(), kRho0, t, n, {11, 0});
    const auto ev = analytic_pt_evolution(paper_system(), kRho0, t);
    EXPECT_LE(0.5 * trace_norm(rec.qubit_state() - ev.state), 1e-10);
    const double sigma = std::sqrt(ev.probability * (1.0 - ev.probability) / static_cast<double>(rec.total_copies_used));
    EXPECT_LE(std::abs(rec.success_ratio - ev.probability), 3.0 * sigma);
  }
}

TEST(SimulatePt, CopyAccountingRestartsOnEitherFailure) {
  const auto& sys = paper_system();
  const double t = 1.0;
  const RngStream rng{77, 5};
  const auto rec = simulate_pt(sys, kRho0, t, 500, rng);
  // stage probabilities from the channel module
  const auto eta = sys.eta2;
  const ComplexMatrix first = apply(g_eta(eta), kRho0);
  const double p1 = first.trace().real();
  const ComplexMatrix rotated = apply(KrausChannel::unitary(matrix_exp_hermitian_generator(sys.h_pt_hermitian, t)),
                                      first / p1);
  const double p2 = apply(g_kappa_eta_inv(eta).channel, rotated).trace().real();
  EXPECT_NEAR(p1 * p2, chained_success_probability(sys, kRho0, t), 1e-12);
  std::uint64_t successes = 0;
  for (std::uint64_t k = 0; k < rec.total_copies_used; ++k)
    successes += (rng.uniform(2 * k) < p1 && rng.uniform(2 * k + 1) < p2) ? 1 : 0;
  EXPECT_EQ(successes, 500u);
}

TEST(SimulatePt, EstimatorConsistencyOverSeeds) {
  const double t = 2.0;
  const double p = chained_success_probability(paper_system(), kRho0, t);
  const std::uint64_t n = 10000;
  double mean = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) mean += simulate_pt(paper_system(), kRho0, t, n, {seed, 1}).success_ratio;
  mean /= 20.0;
  EXPECT_LE(std::abs(mean - p), 4.0 * ratio_sigma(p, n) / std::sqrt(20.0));
}

TEST(SimulatePt, Deterministic) {
  const auto a = simulate_pt(paper_system(), kRho0, 1.5, 3000, {5, 6});
  const auto b = simulate_pt(paper_system(), kRho0, 1.5, 3000, {5, 6});
  EXPECT_EQ(a, b);
}

}  // namespace
}  // namespace metriq

#include <gtest/gtest.h>

#include <cmath>

#include "symform/dynamics.hpp"
#include "symform/error.hpp"
#include "unit/test_support.hpp"

namespace symform {
namespace {

using testing::kPi;

SymmetryLaplacian path_laplacian(int n) { return build_laplacian(cycle_minus_edge(n, {n, 1}), assignment(n)); }

TEST(Configuration, LayoutAndValidation) {
  Eigen::VectorXd v(6);
  v << 1, 2, 3, 4, 5, 6;
  const Configuration c(3, 2, v);
  EXPECT_EQ(c.agent(2), Eigen::Vector2d(3, 4));
  EXPECT_THROW(c.agent(4), InvalidArgument);
  EXPECT_THROW(Configuration(3, 2, Eigen::VectorXd::Zero(5)), InvalidArgument);
  Eigen::VectorXd bad = v;
  bad(2) = std::nan("");
  EXPECT_THROW(Configuration(3, 2, bad), InvalidArgument);
}

TEST(Configuration, RandomBoxIsSeededAndBounded) {
  const auto a = Configuration::random_box(6, 2, -5, 5, 42);
  const auto b = Configuration::random_box(6, 2, -5, 5, 42);
  const auto c = Configuration::random_box(6, 2, -5, 5, 43);
  EXPECT_EQ(a.values(), b.values());
  EXPECT_NE(a.values(), c.values());
  EXPECT_GE(a.values().minCoeff(), -5.0);
  EXPECT_LT(a.values().maxCoeff(), 5.0);
  EXPECT_THROW(Configuration::random_box(6, 2, 1, 1, 0), InvalidArgument);
}

TEST(Potential, ZeroOnSymmetricConfigurations) {
  std::mt19937_64 rng(3);
  const auto q = path_laplacian(5);
  const auto basis = null_basis(q.graph);
  for (int k = 0; k < 20; ++k) {
    const Eigen::VectorXd p = basis.v0 * testing::random_vector(rng, 2, 4.0);
    EXPECT_LT(potential(p, q.graph), 1e-20);
    EXPECT_LT(edge_errors(p, q.graph).maxCoeff(), 1e-12);
    EXPECT_LT(control(p, q).norm(), 1e-12);
  }
}

TEST(Potential, ThreePathHandValue) {
  const auto q = path_laplacian(3);
  Eigen::VectorXd p(6);
  p << 1, 0, 1, 0, 1, 0;
  EXPECT_NEAR(potential(p, q.graph), 3.0, 1e-14);
  EXPECT_NEAR(quadratic_potential(p, q), 3.0, 1e-14);
}

TEST(Potential, MatchesQuadraticFormAndEdgeErrors) {
  std::mt19937_64 rng(5);
  for (int n = 3; n <= 12; ++n) {
    const auto q = path_laplacian(n);
    const Eigen::VectorXd p = testing::random_vector(rng, 2 * n, 5.0);
    const double f = potential(p, q.graph);
    EXPECT_NEAR(f, quadratic_potential(p, q), 1e-10 * (1 + f));
    EXPECT_NEAR(edge_errors(p, q.graph).squaredNorm(), 2 * f, 1e-10 * (1 + f));
    EXPECT_GE(edge_errors(p, q.graph).minCoeff(), 0.0);
  }
}

TEST(Potential, RejectsWrongLength) {
  const auto q = path_laplacian(4);
  EXPECT_THROW(potential(Eigen::VectorXd::Zero(7), q.graph), InvalidArgument);
  EXPECT_THROW(control(Eigen::VectorXd::Zero(7), q), InvalidArgument);
}

TEST(Control, TwoAgentHandExpansion) {
  // One edge 1 -> 2 with τ(γ₁₂) = R(2π/3); per-agent sums of the law:
  // u₁ = τ(γ₂₁)p₂ - p₁, u₂ = τ(γ₁₂)p₁ - p₂.
  RotationGraph g{2, 2, {{1, 2, rotation2(2 * kPi / 3)}}};
  Eigen::VectorXd p(4);
  p << 1, 0, 0, 0;
  const Eigen::VectorXd u = control_per_agent(p, g);
  EXPECT_NEAR(u(0), -1.0, 1e-15);
  EXPECT_NEAR(u(1), 0.0, 1e-15);
  EXPECT_NEAR(u(2), -0.5, 1e-15);
  EXPECT_NEAR(u(3), std::sqrt(3.0) / 2, 1e-15);
  EXPECT_LT((control(p, build_laplacian(g)) - u).norm(), 1e-15);
}

TEST(Control, MatchesPerAgentSumAndGradient) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const auto t = testing::random_tree(rng);
    const auto q = build_laplacian(cycle_minus_edge(t.n, {t.removed, t.removed % t.n + 1}), assignment(t.n));
    const Eigen::VectorXd p = testing::random_vector(rng, 2 * t.n, 5.0);
    const Eigen::VectorXd u = control(p, q);
    EXPECT_LT((u - control_per_agent(p, q.graph)).norm(), 1e-12);
    const Eigen::VectorXd grad =
        testing::central_difference([&](const Eigen::VectorXd& x) { return potential(x, q.graph); }, p);
    EXPECT_LE((grad + u).cwiseAbs().maxCoeff(), 1e-6 * (1 + u.cwiseAbs().maxCoeff()));
  }
}

TEST(Integrate, SymmetricStartIsConstant) {
  const auto q = path_laplacian(6);
  const auto s = spectrum(q);
  const Eigen::VectorXd p0 = null_basis(q.graph).v0 * Eigen::Vector2d(2.0, -1.0);
  const auto trace = integrate(q, p0, default_time_step(s), 10.0);
  for (const auto& p : trace.states) EXPECT_LT((p - p0).norm(), 1e-12);
}

TEST(Integrate, ExampleThreeConvergesToProjection) {
  const auto q = path_laplacian(6);
  const auto s = spectrum(q);
  const auto basis = null_basis(q.graph);
  const Eigen::VectorXd p0 = Configuration::random_box(6, 2, -5, 5, 42).values();
  const auto trace = integrate(q, p0, default_time_step(s), default_horizon(s));
  EXPECT_GE(trace.times.back(), 40 / s.lambda_plus_min() - 1e-9);
  EXPECT_LT((trace.final_state() - steady_state(p0, basis)).norm(), 1e-6);
  EXPECT_LT((trace.final_state() - steady_state_per_agent(p0, basis)).norm(), 1e-6);
  EXPECT_LT(trace.edge_errors.back().maxCoeff(), 1e-8);
  EXPECT_LT(trace.edge_errors.back().maxCoeff(), trace.edge_errors.front().maxCoeff());
}

TEST(Integrate, GridAndMonotonePotential) {
  std::mt19937_64 rng(9);
  for (int n = 3; n <= 10; ++n) {
    const auto q = path_laplacian(n);
    const auto s = spectrum(q);
    const double dt = default_time_step(s);
    const auto trace = integrate(q, testing::random_vector(rng, 2 * n, 5.0), dt, 30.0);
    ASSERT_EQ(trace.size(), step_count(dt, 30.0) + 1);
    for (std::size_t k = 0; k < trace.size(); ++k) {
      EXPECT_DOUBLE_EQ(trace.times[k], static_cast<double>(k) * dt);
      if (k > 0) EXPECT_LE(trace.potential[k], trace.potential[k - 1]);
    }
    EXPECT_GE(trace.times.back(), 30.0 - 1e-12);
  }
}

TEST(Integrate, MatchesClosedFormAtEverySample) {
  std::mt19937_64 rng(13);
  const auto q = path_laplacian(8);
  const auto s = spectrum(q);
  const Eigen::VectorXd p0 = testing::random_vector(rng, 16, 5.0);
  const auto trace = integrate(q, p0, 0.01 / s.lambda_max(), 1.0);
  for (std::size_t k = 0; k < trace.size(); ++k) {
    EXPECT_LT((trace.states[k] - closed_form_solution(s, p0, trace.times[k])).norm(), 1e-6);
  }
}

TEST(Integrate, MatchesIndependentRk4) {
  std::mt19937_64 rng(15);
  const auto q = path_laplacian(5);
  const auto s = spectrum(q);
  const Eigen::VectorXd p0 = testing::random_vector(rng, 10, 5.0);
  const double dt = default_time_step(s);
  const auto trace = integrate(q, p0, dt, 20.0);
  const auto ref = testing::reference_linear_flow(q.matrix, p0, dt, trace.size() - 1);
  for (std::size_t k = 0; k < trace.size(); ++k) EXPECT_LT((trace.states[k] - ref[k]).norm(), 1e-12);
}

TEST(Integrate, RejectsUnstableOrBadSteps) {
  const auto q = path_laplacian(6);
  const auto s = spectrum(q);
  const Eigen::VectorXd p0 = Eigen::VectorXd::Ones(12);
  EXPECT_THROW(integrate(q, p0, 2.0 / s.lambda_max(), 10.0), InvalidArgument);
  EXPECT_THROW(integrate(q, p0, 0.0, 10.0), InvalidArgument);
  EXPECT_THROW(integrate(q, p0, 0.1, 0.01), InvalidArgument);
  try {
    integrate(q, p0, 1.0, 10.0);
    FAIL() << "expected InvalidArgument";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("unstable"), std::string::npos);
  }
}

TEST(FitRate, SlowestModeWithinOnePercent) {
  for (int n : {4, 6, 9}) {
    const auto q = path_laplacian(n);
    const auto s = spectrum(q);
    const Eigen::VectorXd p0 = 3.0 * s.eigenvectors.col(s.null_dimension());
    const auto trace = integrate(q, p0, default_time_step(s), default_horizon(s));
    const double rate = fit_rate(trace);
    EXPECT_NEAR(rate, -s.lambda_plus_min(), 0.01 * s.lambda_plus_min()) << "n=" << n;
  }
}

TEST(FitRate, RandomStartWithinFivePercent) {
  for (std::uint64_t seed : {1u, 2u, 3u, 42u}) {
    const auto q = path_laplacian(6);
    const auto s = spectrum(q);
    const Eigen::VectorXd p0 = Configuration::random_box(6, 2, -5, 5, seed).values();
    const auto trace = integrate(q, p0, default_time_step(s), default_horizon(s));
    EXPECT_NEAR(fit_rate(trace), -s.lambda_plus_min(), 0.05 * s.lambda_plus_min()) << "seed " << seed;
  }
}

TEST(FitRate, RejectsZeroError) {
  const auto q = path_laplacian(4);
  const Eigen::VectorXd p0 = null_basis(q.graph).v0 * Eigen::Vector2d(1.0, 1.0);
  const auto trace = integrate(q, p0, 0.1, 5.0);
  EXPECT_THROW(fit_rate(trace), InvalidArgument);
}

TEST(FitRate, ExactExponential) {
  std::vector<double> t, e;
  for (int k = 0; k <= 100; ++k) {
    t.push_back(0.1 * k);
    e.push_back(3.0 * std::exp(-0.7 * t.back()));
  }
  EXPECT_NEAR(fit_rate(t, e), -0.7, 1e-10);
}

}  // namespace
}  // namespace symform

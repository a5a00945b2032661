#include <gtest/gtest.h>

#include <cmath>

#include "symform/error.hpp"
#include "symform/spatial3d.hpp"
#include "unit/test_support.hpp"

namespace symform {
namespace {

using testing::kPi;

// Frozen from tests/oracles/frozen_values.py.
constexpr double kCubeLambdaPlusMin = 0.1522409349774259;
constexpr double kCubeLambdaMax = 3.847759065022573;

Eigen::Matrix3d rodrigues(Eigen::Vector3d axis, double a) {
  axis.normalize();
  Eigen::Matrix3d k;
  k << 0, -axis.z(), axis.y(), axis.z(), 0, -axis.x(), -axis.y(), axis.x(), 0;
  return Eigen::Matrix3d::Identity() + std::sin(a) * k + (1 - std::cos(a)) * k * k;
}

// Independent block assembly of the standard cube constraints.
Eigen::MatrixXd oracle_cube() {
  const Eigen::Matrix3d rz = rodrigues(Eigen::Vector3d::UnitZ(), kPi / 2);
  const Eigen::Matrix3d ry = rodrigues(Eigen::Vector3d::UnitY(), kPi / 2);
  struct E {
    int u, v;
    Eigen::Matrix3d w;
  };
  const std::vector<E> edges{{1, 2, rz}, {2, 3, rz}, {3, 4, rz}, {5, 6, rz}, {6, 7, rz}, {7, 8, rz}, {1, 5, ry}};
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(24, 24);
  for (const auto& e : edges) {
    const int u = 3 * (e.u - 1), v = 3 * (e.v - 1);
    q.block(u, u, 3, 3) += Eigen::Matrix3d::Identity();
    q.block(v, v, 3, 3) += Eigen::Matrix3d::Identity();
    q.block(u, v, 3, 3) -= e.w.transpose();
    q.block(v, u, 3, 3) -= e.w;
  }
  return q;
}

TEST(Rotation3, QuarterTurnAboutZ) {
  const Eigen::VectorXd y = rotation3(Axis::kZ, kPi / 2).apply(Eigen::Vector3d(1, 0, 0));
  EXPECT_LT((y - Eigen::Vector3d(0, 1, 0)).norm(), 1e-15);
}

TEST(Rotation3, ZRotationRestrictsToPlanar) {
  for (double a : {0.2, 1.0, 3.0, -2.2}) {
    const Eigen::MatrixXd m = rotation3(Axis::kZ, a).matrix();
    EXPECT_LT((m.topLeftCorner(2, 2) - rotation2(a).matrix()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_NEAR(m(2, 2), 1.0, 1e-15);
    EXPECT_NEAR(m.row(2).head(2).norm() + m.col(2).head(2).norm(), 0.0, 1e-15);
  }
}

TEST(Rotation3, QuarterTurnHasOrderFour) {
  std::mt19937_64 rng(61);
  for (int k = 0; k < 20; ++k) {
    const Eigen::Vector3d axis = testing::random_vector(rng, 3).normalized();
    const Eigen::MatrixXd m = rotation3(axis, kPi / 2).matrix();
    EXPECT_LT((m * m * m * m - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((m * axis - axis).norm(), 1e-12);  // axis is the +1 eigenvector
    EXPECT_LT((m - rodrigues(axis, kPi / 2)).cwiseAbs().maxCoeff(), 1e-12);
  }
  EXPECT_THROW(rotation3(Eigen::Vector3d::Zero(), 1.0), InvalidArgument);
}

TEST(Cube, MatchesIndependentAssembly) {
  const auto cube = build_cube();
  EXPECT_EQ(cube.q.size(), 24);
  EXPECT_EQ(cube.q.graph.edges.size(), 7u);
  EXPECT_LT((cube.q.matrix - oracle_cube()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Cube, ComposedFormAgrees) {
  const auto cube = build_cube();
  EXPECT_LT((cube.composed_form() - cube.q.matrix).cwiseAbs().maxCoeff(), 1e-12);
  // The permutation is a genuine permutation matrix.
  EXPECT_LT((cube.permutation * cube.permutation.transpose() - Eigen::MatrixXd::Identity(24, 24)).cwiseAbs().maxCoeff(),
            1e-15);
}

TEST(Cube, SpectrumAndNullSpace) {
  const auto cube = build_cube();
  const auto s = spectrum(cube.q);
  EXPECT_GE(s.eigenvalues.minCoeff(), -1e-9);
  EXPECT_EQ(s.null_dimension(), 3);
  EXPECT_NEAR(s.lambda_plus_min(), kCubeLambdaPlusMin, 1e-12);
  EXPECT_NEAR(s.lambda_max(), kCubeLambdaMax, 1e-12);
  const auto basis = null_basis(cube.q.graph);
  EXPECT_LT((cube.q.matrix * basis.v0).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((basis.v0.transpose() * basis.v0 - 8 * Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(), 1e-10);
  std::mt19937_64 rng(63);
  for (int k = 0; k < 10; ++k) {
    EXPECT_LT((cube.q.matrix * (basis.v0 * testing::random_vector(rng, 3, 2.0))).norm(), 1e-10);
  }
}

TEST(Cube, CornersAreSymmetric) {
  const auto cube = build_cube();
  EXPECT_LT((cube.q.matrix * cube_corners()).norm(), 1e-12);
  const auto run = simulate_cube(cube, cube_corners(), ReferenceInputs::zero(3, 10.0), ReferenceState::identity(3),
                                 0.1, 10.0);
  for (const auto& p : run.trace.states) EXPECT_LT((p - cube_corners()).norm(), 1e-12);
}

TEST(Cube, StationaryRunConvergesToProjection) {
  const auto cube = build_cube();
  const auto s = spectrum(cube.q);
  const auto basis = null_basis(cube.q.graph);
  const Eigen::VectorXd p0 = Configuration::random_box(8, 3, -2, 2, 3).values();
  const double horizon = default_horizon(s);
  const auto run = simulate_cube(cube, p0, ReferenceInputs::zero(3, horizon + 1.0), ReferenceState::identity(3),
                                 default_time_step(s), horizon);
  EXPECT_LT(run.trace.edge_errors.back().maxCoeff(), 1e-8);
  EXPECT_LT((run.trace.final_state() - steady_state(p0, basis)).norm(), 1e-6);
  EXPECT_EQ(run.trace.edge_errors.back().size(), 7);
}

TEST(Cube, ManeuverReportsReductionResidual) {
  const auto cube = build_cube();
  const auto s = spectrum(cube.q);
  const ReferenceInputs in(3, {{0, 21, Eigen::Vector3d(0.5, 0, 0), Eigen::Vector3d(0.3, 0.0, 0.0), 0.0}});
  const Eigen::VectorXd p0 = Configuration::random_box(8, 3, -2, 2, 5).values();
  const auto run = simulate_cube(cube, p0, in, ReferenceState::identity(3), default_time_step(s), 20.0);
  ASSERT_EQ(run.reduction_residual.size(), run.trace.size());
  double worst = 0.0;
  for (double r : run.reduction_residual) {
    EXPECT_TRUE(std::isfinite(r));
    worst = std::max(worst, r);
  }
  // Rotation about x does not commute with the z/y edge rotations.
  EXPECT_GT(worst, 1e-6);
  EXPECT_THROW(simulate_cube(cube, p0, ReferenceInputs::zero(2, 5.0), ReferenceState::identity(2), 0.1, 5.0),
               InvalidArgument);
}

TEST(Cube, RejectsNonTreeSpecs) {
  CubeSpec extra = CubeSpec::standard();
  extra.cross.links = {0, 1};  // adds 2-1, duplicating a face edge
  EXPECT_THROW(build_cube(extra), InvalidArgument);
  CubeSpec missing = CubeSpec::standard();
  missing.cross.links = {};
  EXPECT_THROW(build_cube(missing), InvalidArgument);
  CubeSpec out_of_range = CubeSpec::standard();
  out_of_range.cross.nodes = {2, 1, 5, 9};
  EXPECT_THROW(build_cube(out_of_range), InvalidArgument);
}

TEST(Cube, AlternativeCrossLinkAlsoSpans) {
  CubeSpec spec = CubeSpec::standard();
  spec.cross.links = {3};  // 6-2 instead of 1-5
  const auto cube = build_cube(spec);
  EXPECT_EQ(spectrum(cube.q).null_dimension(), 3);
  EXPECT_LT((cube.composed_form() - cube.q.matrix).cwiseAbs().maxCoeff(), 1e-12);
}

}  // namespace
}  // namespace symform

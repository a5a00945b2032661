#pragma once

#include <vector>

#include <Eigen/Dense>

#include "symform/maneuver.hpp"

namespace symform {

enum class Axis { kX, kY, kZ };

Eigen::Vector3d unit_vector(Axis axis);

/// Proper rotation by theta about `axis` (normalized; zero is rejected).
Rotation rotation3(const Eigen::Vector3d& axis, double theta);
Rotation rotation3(Axis axis, double theta);

/// A C_m symmetry chain in space: nodes[k] -> nodes[k+1 mod m] under the
/// rotation by 2π/m about `axis`. Only the listed links (k means the pair
/// nodes[k], nodes[k+1 mod m]) become interaction edges.
struct SymmetryChain {
  std::vector<int> nodes;
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
  std::vector<int> links;
};

/// Constraint layout of the cube: two z-axis faces and one cross chain.
struct CubeSpec {
  SymmetryChain top;
  SymmetryChain bottom;
  SymmetryChain cross;

  /// Faces {1,2,3,4} and {5,6,7,8} about z with links 0,1,2 and the
  /// chain {2,1,5,6} about y keeping only the 1-5 link: 7 edges in all.
  static CubeSpec standard();
};

struct CompositeLaplacian {
  SymmetryLaplacian q;            // 24x24, assembled edge by edge
  Eigen::MatrixXd q_z;            // 12x12 face Laplacian in local order
  Eigen::MatrixXd q_perp;         // 12x12 cross-chain Laplacian in local order
  Eigen::MatrixXd permutation;    // 24x24, local cross-chain order -> global
  CubeSpec spec;

  /// I₂⊗Q_z + P·blockdiag(Q_⊥, 0)·Pᵀ. Requires top = 1..4 and bottom =
  /// 5..8 with identical axis and links.
  Eigen::MatrixXd composed_form() const;
};

/// Edges contributed by one chain, in the order of `chain.links`.
std::vector<RotationEdge> chain_edges(const SymmetryChain& chain);

/// Throws InvalidArgument unless the union of chain edges is a spanning
/// tree on 8 nodes.
CompositeLaplacian build_cube(const CubeSpec& spec = CubeSpec::standard());

/// Canonical cube corners (±1, ±1, ±1) labelled to match CubeSpec::standard.
Eigen::VectorXd cube_corners();

/// Stationary runs use zero inputs; with a reference the ζ-reduction
/// residual is recorded per sample but is not expected to vanish when R(t)
/// rotates about an axis that does not commute with the edge rotations.
ManeuverTrace simulate_cube(const CompositeLaplacian& cube, const Eigen::VectorXd& p0,
                            const ReferenceInputs& inputs, const ReferenceState& ref0, double dt,
                            double horizon);

}  // namespace symform

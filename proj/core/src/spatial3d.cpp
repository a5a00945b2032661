#include "symform/spatial3d.hpp"

#include <algorithm>
#include <numbers>
#include <string>

#include "symform/error.hpp"

namespace symform {

namespace {

constexpr int kCubeNodes = 8;
constexpr int kDim = 3;

Eigen::MatrixXd local_laplacian(const SymmetryChain& chain) {
  // Same chain relabelled 1..m.
  SymmetryChain local = chain;
  for (std::size_t k = 0; k < local.nodes.size(); ++k) local.nodes[k] = static_cast<int>(k) + 1;
  const int m = static_cast<int>(local.nodes.size());
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(kDim * m, kDim * m);
  for (const auto& e : chain_edges(local)) {
    const Eigen::Index iu = kDim * (e.u - 1);
    const Eigen::Index iv = kDim * (e.v - 1);
    q.block(iu, iu, kDim, kDim) += Eigen::Matrix3d::Identity();
    q.block(iv, iv, kDim, kDim) += Eigen::Matrix3d::Identity();
    q.block(iu, iv, kDim, kDim) -= e.transfer.matrix().transpose();
    q.block(iv, iu, kDim, kDim) -= e.transfer.matrix();
  }
  return q;
}

bool is_block(const SymmetryChain& c, int first) {
  if (c.nodes.size() != 4) return false;
  for (int k = 0; k < 4; ++k) {
    if (c.nodes[static_cast<std::size_t>(k)] != first + k) return false;
  }
  return true;
}

}  // namespace

Eigen::Vector3d unit_vector(Axis axis) {
  switch (axis) {
    case Axis::kX:
      return Eigen::Vector3d::UnitX();
    case Axis::kY:
      return Eigen::Vector3d::UnitY();
    case Axis::kZ:
      return Eigen::Vector3d::UnitZ();
  }
  throw InvalidArgument("unknown axis");
}

Rotation rotation3(const Eigen::Vector3d& axis, double theta) { return Rotation::spatial(axis, theta); }

Rotation rotation3(Axis axis, double theta) { return Rotation::spatial(unit_vector(axis), theta); }

CubeSpec CubeSpec::standard() {
  return {{{1, 2, 3, 4}, Eigen::Vector3d::UnitZ(), {0, 1, 2}},
          {{5, 6, 7, 8}, Eigen::Vector3d::UnitZ(), {0, 1, 2}},
          {{2, 1, 5, 6}, Eigen::Vector3d::UnitY(), {1}}};
}

std::vector<RotationEdge> chain_edges(const SymmetryChain& chain) {
  const int m = static_cast<int>(chain.nodes.size());
  if (m < 3) throw InvalidArgument("symmetry chain needs at least 3 nodes");
  const Rotation step = rotation3(chain.axis, 2.0 * std::numbers::pi / m);
  std::vector<RotationEdge> out;
  for (int link : chain.links) {
    if (link < 0 || link >= m) throw InvalidArgument("chain link " + std::to_string(link) + " out of range");
    out.push_back({chain.nodes[static_cast<std::size_t>(link)],
                   chain.nodes[static_cast<std::size_t>((link + 1) % m)], step});
  }
  return out;
}

CompositeLaplacian build_cube(const CubeSpec& spec) {
  RotationGraph g{kCubeNodes, kDim, {}};
  for (const auto* chain : {&spec.top, &spec.bottom, &spec.cross}) {
    for (const int node : chain->nodes) {
      if (node < 1 || node > kCubeNodes) throw InvalidArgument("cube chain node out of range 1..8");
    }
    for (auto& e : chain_edges(*chain)) g.edges.push_back(std::move(e));
  }
  if (auto report = validate(g); !report) {
    throw InvalidArgument("cube constraint edges do not form a spanning tree: " + *report.violation);
  }

  CompositeLaplacian out{build_laplacian(g), local_laplacian(spec.top), local_laplacian(spec.cross),
                         Eigen::MatrixXd::Zero(kDim * kCubeNodes, kDim * kCubeNodes), spec};

  // Local block k of the cross chain lands on global node cross.nodes[k];
  // the remaining local slots take the other nodes in increasing order.
  std::vector<int> order = spec.cross.nodes;
  for (int node = 1; node <= kCubeNodes; ++node) {
    if (std::find(order.begin(), order.end(), node) == order.end()) order.push_back(node);
  }
  if (order.size() != static_cast<std::size_t>(kCubeNodes)) throw InvalidArgument("cross chain repeats a node");
  for (std::size_t k = 0; k < order.size(); ++k) {
    out.permutation.block(kDim * (order[k] - 1), kDim * static_cast<Eigen::Index>(k), kDim, kDim).setIdentity();
  }
  return out;
}

Eigen::MatrixXd CompositeLaplacian::composed_form() const {
  if (!is_block(spec.top, 1) || !is_block(spec.bottom, 5) || spec.top.links != spec.bottom.links ||
      !spec.top.axis.normalized().isApprox(spec.bottom.axis.normalized(), 1e-12)) {
    throw InvalidArgument("composed form needs faces 1..4 and 5..8 with identical constraints");
  }
  const Eigen::Index n = kDim * kCubeNodes;
  const Eigen::Index face = q_z.rows();
  Eigen::MatrixXd faces = Eigen::MatrixXd::Zero(n, n);
  faces.topLeftCorner(face, face) = q_z;
  faces.bottomRightCorner(face, face) = q_z;

  Eigen::MatrixXd embedded = Eigen::MatrixXd::Zero(n, n);
  embedded.topLeftCorner(q_perp.rows(), q_perp.cols()) = q_perp;
  return faces + permutation * embedded * permutation.transpose();
}

Eigen::VectorXd cube_corners() {
  Eigen::VectorXd p(kDim * kCubeNodes);
  // Top face counter-clockwise at z = 1, bottom face directly below.
  p << 1, 1, 1, -1, 1, 1, -1, -1, 1, 1, -1, 1,
       1, 1, -1, -1, 1, -1, -1, -1, -1, 1, -1, -1;
  return p;
}

ManeuverTrace simulate_cube(const CompositeLaplacian& cube, const Eigen::VectorXd& p0,
                            const ReferenceInputs& inputs, const ReferenceState& ref0, double dt,
                            double horizon) {
  if (inputs.dimension() != kDim) throw InvalidArgument("cube inputs must be spatial");
  return simulate_maneuver(cube.q, p0, inputs, ref0, dt, horizon);
}

}  // namespace symform

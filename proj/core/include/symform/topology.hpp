#pragma once

#include <optional>
#include <string>
#include <vector>

#include "symform/symgroup.hpp"

namespace symform {

/// An unordered node pair, 1-based. Stored as given; `same_link` ignores order.
struct Edge {
  int u = 0;
  int v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

bool same_link(const Edge& a, const Edge& b) noexcept;

/// The cycle graph C_n with edges {i, i+1 mod n}.
class CycleGraph {
 public:
  explicit CycleGraph(int n);

  int size() const noexcept { return n_; }
  std::vector<Edge> edges() const;
  bool contains(const Edge& e) const noexcept;

 private:
  int n_;
};

/// Edge of an interaction graph. `forward` is γ_uv, the automorphism taking
/// u to v; on the symmetric target τ(γ_uv)·p_u = p_v, and the edge
/// constraint reads p_u - τ(γ_vu)·p_v with γ_vu = forward⁻¹.
struct TreeEdge {
  int u = 0;
  int v = 0;
  CyclicAutomorphism forward;
};

/// Planar interaction graph: a spanning tree of C_n carrying one cyclic
/// automorphism per edge.
struct InteractionGraph {
  int n = 0;
  int dimension = 2;
  std::vector<TreeEdge> edges;
};

/// Edge carrying an explicit rotation with p_v = transfer·p_u on target.
/// This is the dimension-agnostic form consumed by the Laplacian builders.
struct RotationEdge {
  int u = 0;
  int v = 0;
  Rotation transfer;
};

struct RotationGraph {
  int n = 0;
  int dimension = 2;
  std::vector<RotationEdge> edges;
};

/// Result of `validate`: empty on success, otherwise the first violated
/// property ("not acyclic", "not connected", ...).
struct ValidationReport {
  std::optional<std::string> violation;

  bool ok() const noexcept { return !violation.has_value(); }
  explicit operator bool() const noexcept { return ok(); }
};

ValidationReport validate(const InteractionGraph& g);
/// Spanning-tree checks only; no cycle-subgraph condition.
ValidationReport validate(const RotationGraph& g);

/// Path tree obtained by deleting one edge of C_n; each remaining edge
/// (i, i+1) carries the generator (shift 1). Edges are listed starting
/// right after the removed one.
InteractionGraph cycle_minus_edge(int n, Edge removed);

/// Attaches τ(γ_uv) to each edge. Throws if `g` is invalid or the
/// assignment order differs from n.
RotationGraph with_rotations(const InteractionGraph& g, const PointGroupAssignment& tau);

/// S_i for every node, S_1 = I, S_child = τ(γ_parent→child)·S_parent along
/// the tree from node 1.
struct RotationChain {
  std::vector<Rotation> blocks;  // blocks[i-1] = S_i
  /// For planar chains built from automorphisms: the integer shift k_i
  /// with S_i = R(k_i·2π/n).
  std::optional<std::vector<int>> shifts;

  const Rotation& operator[](int node) const { return blocks.at(static_cast<std::size_t>(node - 1)); }
  int size() const noexcept { return static_cast<int>(blocks.size()); }
};

RotationChain rotation_chain(const InteractionGraph& g, const PointGroupAssignment& tau);
RotationChain rotation_chain(const RotationGraph& g);

/// True when the chain places node i at S_i = R((i-1)·k·2π/n) for some k
/// coprime to n, i.e. the target is a labelled regular C_n pattern.
/// Per-edge shifts other than 1 can break this; callers surface it as a
/// warning.
bool reproduces_cyclic_target(const RotationChain& chain, int n);

/// γ(i) for the cyclic shift γ.
int permutation_action(const CyclicAutomorphism& g, int node);

}  // namespace symform

#include "symform/topology.hpp"

#include <deque>
#include <numeric>

#include "symform/error.hpp"

namespace symform {

namespace {

struct Adjacent {
  int node;
  std::size_t edge;
  bool along;  // traversed u -> v
};

std::optional<std::string> tree_violation(int n, const std::vector<Edge>& links) {
  if (n < 1) return "empty graph";
  for (const auto& e : links) {
    if (e.u < 1 || e.u > n || e.v < 1 || e.v > n) return "edge endpoint out of range";
    if (e.u == e.v) return "self loop";
  }
  for (std::size_t a = 0; a < links.size(); ++a) {
    for (std::size_t b = a + 1; b < links.size(); ++b) {
      if (same_link(links[a], links[b])) return "duplicate edge";
    }
  }
  if (links.size() >= static_cast<std::size_t>(n)) return "not acyclic";

  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n + 1));
  for (const auto& e : links) {
    adj[static_cast<std::size_t>(e.u)].push_back(e.v);
    adj[static_cast<std::size_t>(e.v)].push_back(e.u);
  }
  std::vector<bool> seen(static_cast<std::size_t>(n + 1), false);
  std::deque<int> queue{1};
  seen[1] = true;
  int visited = 0;
  while (!queue.empty()) {
    const int at = queue.front();
    queue.pop_front();
    ++visited;
    for (int next : adj[static_cast<std::size_t>(at)]) {
      if (!seen[static_cast<std::size_t>(next)]) {
        seen[static_cast<std::size_t>(next)] = true;
        queue.push_back(next);
      }
    }
  }
  if (visited != n) return "not connected";
  // n-1 edges and connected: a tree.
  if (links.size() + 1 != static_cast<std::size_t>(n)) return "not acyclic";
  return std::nullopt;
}

template <typename EdgeT>
std::vector<Edge> links_of(const std::vector<EdgeT>& edges) {
  std::vector<Edge> out;
  out.reserve(edges.size());
  for (const auto& e : edges) out.push_back({e.u, e.v});
  return out;
}

// Breadth-first order from node 1: (node, edge index, traversed along u->v).
template <typename EdgeT>
std::vector<Adjacent> bfs_tree(int n, const std::vector<EdgeT>& edges) {
  std::vector<std::vector<Adjacent>> adj(static_cast<std::size_t>(n + 1));
  for (std::size_t k = 0; k < edges.size(); ++k) {
    adj[static_cast<std::size_t>(edges[k].u)].push_back({edges[k].v, k, true});
    adj[static_cast<std::size_t>(edges[k].v)].push_back({edges[k].u, k, false});
  }
  std::vector<Adjacent> order;
  std::vector<bool> seen(static_cast<std::size_t>(n + 1), false);
  std::deque<int> queue{1};
  seen[1] = true;
  while (!queue.empty()) {
    const int at = queue.front();
    queue.pop_front();
    for (const auto& step : adj[static_cast<std::size_t>(at)]) {
      if (seen[static_cast<std::size_t>(step.node)]) continue;
      seen[static_cast<std::size_t>(step.node)] = true;
      order.push_back(step);
      queue.push_back(step.node);
    }
  }
  return order;
}

// The parent of `step.node` is the other endpoint of its edge.
template <typename EdgeT>
int parent_of(const Adjacent& step, const std::vector<EdgeT>& edges) {
  const auto& e = edges[step.edge];
  return step.along ? e.u : e.v;
}

}  // namespace

bool same_link(const Edge& a, const Edge& b) noexcept {
  return (a.u == b.u && a.v == b.v) || (a.u == b.v && a.v == b.u);
}

CycleGraph::CycleGraph(int n) : n_(n) {
  if (n < 3) throw InvalidArgument("cycle graph needs n >= 3");
}

std::vector<Edge> CycleGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(static_cast<std::size_t>(n_));
  for (int i = 1; i <= n_; ++i) out.push_back({i, i % n_ + 1});
  return out;
}

bool CycleGraph::contains(const Edge& e) const noexcept {
  if (e.u < 1 || e.u > n_ || e.v < 1 || e.v > n_) return false;
  return e.v == e.u % n_ + 1 || e.u == e.v % n_ + 1;
}

ValidationReport validate(const InteractionGraph& g) {
  if (g.n < 3) return {"cycle graph needs n >= 3"};
  if (g.dimension != 2) return {"interaction graphs over C_n are planar"};
  const CycleGraph cycle(g.n);
  for (const auto& e : g.edges) {
    if (e.forward.order() != g.n) return {"edge automorphism has wrong order"};
    if (!cycle.contains({e.u, e.v})) return {"edge is not an edge of C_n"};
  }
  return {tree_violation(g.n, links_of(g.edges))};
}

ValidationReport validate(const RotationGraph& g) {
  if (g.dimension != 2 && g.dimension != 3) return {"dimension must be 2 or 3"};
  for (const auto& e : g.edges) {
    if (e.transfer.dimension() != g.dimension) return {"edge rotation has wrong dimension"};
  }
  return {tree_violation(g.n, links_of(g.edges))};
}

InteractionGraph cycle_minus_edge(int n, Edge removed) {
  const CycleGraph cycle(n);
  if (!cycle.contains(removed)) {
    throw InvalidArgument("(" + std::to_string(removed.u) + "," + std::to_string(removed.v) +
                          ") is not an edge of C_" + std::to_string(n));
  }
  // Start the path at the endpoint that follows the removed edge in cycle order.
  const int head = (removed.v == removed.u % n + 1) ? removed.v : removed.u;
  InteractionGraph g{n, 2, {}};
  g.edges.reserve(static_cast<std::size_t>(n - 1));
  for (int k = 0; k < n - 1; ++k) {
    const int u = (head - 1 + k) % n + 1;
    g.edges.push_back({u, u % n + 1, CyclicAutomorphism(n, 1)});
  }
  return g;
}

RotationGraph with_rotations(const InteractionGraph& g, const PointGroupAssignment& tau) {
  if (auto report = validate(g); !report) throw InvalidArgument(*report.violation);
  if (tau.order() != g.n) throw InvalidArgument("assignment order does not match graph size");
  RotationGraph out{g.n, g.dimension, {}};
  out.edges.reserve(g.edges.size());
  for (const auto& e : g.edges) out.edges.push_back({e.u, e.v, tau(e.forward)});
  return out;
}

RotationChain rotation_chain(const InteractionGraph& g, const PointGroupAssignment& tau) {
  if (auto report = validate(g); !report) throw InvalidArgument(*report.violation);
  if (tau.order() != g.n) throw InvalidArgument("assignment order does not match graph size");
  std::vector<int> shift(static_cast<std::size_t>(g.n), 0);
  for (const auto& step : bfs_tree(g.n, g.edges)) {
    const auto& e = g.edges[step.edge];
    const int parent = parent_of(step, g.edges);
    const int delta = step.along ? e.forward.shift() : e.forward.inverse().shift();
    shift[static_cast<std::size_t>(step.node - 1)] =
        (shift[static_cast<std::size_t>(parent - 1)] + delta) % g.n;
  }
  RotationChain chain;
  chain.blocks.reserve(shift.size());
  for (int k : shift) chain.blocks.push_back(tau.of_shift(k));
  chain.shifts = std::move(shift);
  return chain;
}

RotationChain rotation_chain(const RotationGraph& g) {
  if (auto report = validate(g); !report) throw InvalidArgument(*report.violation);
  std::vector<Rotation> blocks(static_cast<std::size_t>(g.n), Rotation::identity(g.dimension));
  for (const auto& step : bfs_tree(g.n, g.edges)) {
    const auto& e = g.edges[step.edge];
    const int parent = parent_of(step, g.edges);
    const Rotation link = step.along ? e.transfer : e.transfer.transpose();
    blocks[static_cast<std::size_t>(step.node - 1)] =
        link * blocks[static_cast<std::size_t>(parent - 1)];
  }
  return RotationChain{std::move(blocks), std::nullopt};
}

bool reproduces_cyclic_target(const RotationChain& chain, int n) {
  if (!chain.shifts || chain.size() != n) return false;
  const auto& s = *chain.shifts;
  const int k = s.size() > 1 ? s[1] : 0;
  if (std::gcd(k, n) != 1) return false;
  for (int i = 0; i < n; ++i) {
    if (s[static_cast<std::size_t>(i)] != (i * k) % n) return false;
  }
  return true;
}

int permutation_action(const CyclicAutomorphism& g, int node) { return g(node); }

}  // namespace symform

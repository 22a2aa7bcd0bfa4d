#include "paragraph/signed_graph.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <queue>
#include <string>
#include <tuple>
#include <unordered_map>

namespace paragraph {

ParaphraseGraph ParaphraseGraph::from_edges(std::size_t n_nodes, std::vector<SignedEdge> edges) {
  for (SignedEdge& e : edges) {
    if (e.a == e.b) throw DatasetError("self-loop on node " + std::to_string(e.a));
    if (e.a > e.b) std::swap(e.a, e.b);
    if (e.b >= n_nodes) throw DatasetError("edge endpoint " + std::to_string(e.b) + " out of range");
  }
  std::sort(edges.begin(), edges.end(),
            [](const SignedEdge& x, const SignedEdge& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
  auto dup = std::adjacent_find(edges.begin(), edges.end(),
                                [](const SignedEdge& x, const SignedEdge& y) { return x.a == y.a && x.b == y.b; });
  if (dup != edges.end()) {
    throw DatasetError("duplicate unordered pair (" + std::to_string(dup->a) + ", " + std::to_string(dup->b) + ")");
  }

  ParaphraseGraph g;
  g.n_nodes_ = n_nodes;
  g.offsets_.assign(n_nodes + 1, 0);
  for (const SignedEdge& e : edges) {
    ++g.offsets_[e.a + 1];
    ++g.offsets_[e.b + 1];
  }
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
  g.adjacency_.resize(2 * edges.size());
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const SignedEdge& e : edges) {
    g.adjacency_[cursor[e.a]++] = {e.b, e.sign};
    g.adjacency_[cursor[e.b]++] = {e.a, e.sign};
  }
  for (std::size_t v = 0; v < n_nodes; ++v) {
    std::sort(g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]),
              g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]),
              [](const Neighbor& x, const Neighbor& y) { return x.node < y.node; });
  }
  g.edges_ = std::move(edges);
  return g;
}

std::span<const Neighbor> ParaphraseGraph::neighbors(NodeId node) const {
  if (node >= n_nodes_) throw DatasetError("unknown node " + std::to_string(node));
  return std::span<const Neighbor>(adjacency_).subspan(offsets_[node], offsets_[node + 1] - offsets_[node]);
}

std::optional<Label> ParaphraseGraph::sign_between(NodeId x, NodeId y) const {
  auto list = neighbors(x);
  auto it = std::lower_bound(list.begin(), list.end(), y,
                             [](const Neighbor& n, NodeId target) { return n.node < target; });
  if (it == list.end() || it->node != y) return std::nullopt;
  return it->sign;
}

ParaphraseGraph build_graph(const LabeledDataset& dataset) {
  std::vector<SignedEdge> edges;
  edges.reserve(dataset.pairs.size());
  for (const LabeledPair& pair : dataset.pairs) edges.push_back({pair.a, pair.b, pair.label});
  return ParaphraseGraph::from_edges(dataset.sentences.size(), std::move(edges));
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), NodeId{0});
  }

  NodeId find(NodeId x) {
    NodeId root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      NodeId next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  void unite(NodeId x, NodeId y) {
    x = find(x);
    y = find(y);
    if (x == y) return;
    if (size_[x] < size_[y]) std::swap(x, y);
    parent_[y] = x;
    size_[x] += size_[y];
  }

 private:
  std::vector<NodeId> parent_;
  std::vector<std::size_t> size_;
};

}  // namespace

ClusterIndex positive_components(const ParaphraseGraph& graph) {
  const std::size_t n = graph.node_count();
  DisjointSets sets(n);
  for (const SignedEdge& e : graph.edges()) {
    if (e.sign == Label::Positive) sets.unite(e.a, e.b);
  }

  constexpr ClusterId kUnassigned = static_cast<ClusterId>(-1);
  std::vector<ClusterId> cluster_of_root(n, kUnassigned);
  std::vector<ClusterId> component_of(n);
  std::vector<std::vector<NodeId>> members;
  // Ascending node order hands out ids by smallest member and keeps member
  // lists sorted.
  for (NodeId v = 0; v < n; ++v) {
    const NodeId root = sets.find(v);
    if (cluster_of_root[root] == kUnassigned) {
      cluster_of_root[root] = static_cast<ClusterId>(members.size());
      members.emplace_back();
    }
    component_of[v] = cluster_of_root[root];
    members[component_of[v]].push_back(v);
  }
  return ClusterIndex(std::move(component_of), std::move(members));
}

namespace {

// Breadth-first parents over positive edges, visiting neighbors in ascending
// id order. Stops early once `stop` is labeled. Sized by the cluster, not
// the graph.
std::unordered_map<NodeId, NodeId> positive_bfs(const ParaphraseGraph& graph, NodeId source,
                                                std::optional<NodeId> stop) {
  std::unordered_map<NodeId, NodeId> parent;
  std::queue<NodeId> frontier;
  parent.emplace(source, source);
  frontier.push(source);
  while (!frontier.empty()) {
    if (stop && parent.contains(*stop)) break;
    const NodeId cur = frontier.front();
    frontier.pop();
    for (const Neighbor& n : graph.neighbors(cur)) {
      if (n.sign != Label::Positive) continue;
      if (parent.emplace(n.node, cur).second) frontier.push(n.node);
    }
  }
  return parent;
}

PositivePath unwind(const std::unordered_map<NodeId, NodeId>& parent, NodeId source, NodeId target) {
  PositivePath path;
  for (NodeId v = target; v != source; v = parent.at(v)) path.nodes.push_back(v);
  path.nodes.push_back(source);
  std::reverse(path.nodes.begin(), path.nodes.end());
  return path;
}

}  // namespace

PositivePathTree::PositivePathTree(const ParaphraseGraph& graph, NodeId source) : source_(source) {
  if (source >= graph.node_count()) throw DatasetError("unknown node " + std::to_string(source));
  parent_ = positive_bfs(graph, source, std::nullopt);
}

std::optional<PositivePath> PositivePathTree::path_to(NodeId node) const {
  if (!reaches(node)) return std::nullopt;
  return unwind(parent_, source_, node);
}

std::optional<PositivePath> shortest_positive_path(const ParaphraseGraph& graph, NodeId u, NodeId v) {
  const std::size_t n = graph.node_count();
  if (u >= n) throw DatasetError("unknown node " + std::to_string(u));
  if (v >= n) throw DatasetError("unknown node " + std::to_string(v));
  const auto parent = positive_bfs(graph, u, v);
  if (!parent.contains(v)) return std::nullopt;
  return unwind(parent, u, v);
}

void write_edge_list(const ParaphraseGraph& graph, std::ostream& out) {
  for (const SignedEdge& e : graph.edges()) {
    out << e.a << '\t' << e.b << '\t' << (e.sign == Label::Positive ? '+' : '-') << '\n';
  }
}

}  // namespace paragraph

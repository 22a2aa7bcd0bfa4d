#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "paragraph/corpus_io.hpp"

namespace paragraph {

using ClusterId = std::uint32_t;

struct SignedEdge {
  NodeId a = 0;  // a < b
  NodeId b = 0;
  Label sign = Label::Negative;

  friend bool operator==(const SignedEdge&, const SignedEdge&) = default;
};

struct Neighbor {
  NodeId node = 0;
  Label sign = Label::Negative;
};

// Undirected signed graph in compressed adjacency form. Edges are sorted by
// (a, b); each node's neighbor list is sorted by neighbor id. Immutable once
// built, so it can be shared across threads.
class ParaphraseGraph {
 public:
  ParaphraseGraph() = default;

  // Throws DatasetError on self-loops, out-of-range endpoints or a repeated
  // unordered pair. Endpoints may be given in either order.
  static ParaphraseGraph from_edges(std::size_t n_nodes, std::vector<SignedEdge> edges);

  std::size_t node_count() const { return n_nodes_; }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const SignedEdge> edges() const { return edges_; }
  std::span<const Neighbor> neighbors(NodeId node) const;
  std::optional<Label> sign_between(NodeId x, NodeId y) const;

 private:
  std::size_t n_nodes_ = 0;
  std::vector<SignedEdge> edges_;
  std::vector<std::size_t> offsets_;  // n_nodes_ + 1 entries
  std::vector<Neighbor> adjacency_;
};

ParaphraseGraph build_graph(const LabeledDataset& dataset);

// Partition of the nodes into connected components of the positive edges.
// Cluster ids are assigned in order of each cluster's smallest node id, and
// member lists are sorted, so the index depends only on the graph.
class ClusterIndex {
 public:
  ClusterIndex() = default;
  ClusterIndex(std::vector<ClusterId> component_of, std::vector<std::vector<NodeId>> members)
      : component_of_(std::move(component_of)), members_(std::move(members)) {}

  ClusterId cluster_of(NodeId node) const { return component_of_.at(node); }
  std::span<const NodeId> members(ClusterId cluster) const { return members_.at(cluster); }
  std::size_t cluster_count() const { return members_.size(); }
  std::size_t node_count() const { return component_of_.size(); }
  bool same_cluster(NodeId x, NodeId y) const { return cluster_of(x) == cluster_of(y); }

 private:
  std::vector<ClusterId> component_of_;
  std::vector<std::vector<NodeId>> members_;
};

ClusterIndex positive_components(const ParaphraseGraph& graph);

struct PositivePath {
  std::vector<NodeId> nodes;

  std::size_t length() const { return nodes.empty() ? 0 : nodes.size() - 1; }
  friend bool operator==(const PositivePath&, const PositivePath&) = default;
};

// Minimum-hop path over positive edges, or nullopt when u and v are in
// different clusters. Neighbors are expanded in ascending id order, so the
// chosen path among equal-length alternatives is reproducible. Throws
// DatasetError for an unknown node.
std::optional<PositivePath> shortest_positive_path(const ParaphraseGraph& graph, NodeId u, NodeId v);

// Breadth-first tree over positive edges from one source; answers many
// path queries from that source with the same tie-breaking as
// shortest_positive_path.
class PositivePathTree {
 public:
  PositivePathTree(const ParaphraseGraph& graph, NodeId source);

  bool reaches(NodeId node) const { return parent_.contains(node); }
  std::optional<PositivePath> path_to(NodeId node) const;

 private:
  NodeId source_;
  std::unordered_map<NodeId, NodeId> parent_;
};

// Writes "a<TAB>b<TAB>+|-" lines in edge order, for external graph tools.
void write_edge_list(const ParaphraseGraph& graph, std::ostream& out);

}  // namespace paragraph

#include "paragraph/label_inference.hpp"

#include <algorithm>
#include <string>
#include <tuple>

namespace paragraph {

std::string_view to_string(ConflictHandling handling) {
  switch (handling) {
    case ConflictHandling::Drop:
      return "drop";
    case ConflictHandling::PreferPositive:
      return "prefer-positive";
    case ConflictHandling::PreferNegative:
      return "prefer-negative";
  }
  return "unknown";
}

std::optional<ConflictHandling> parse_conflict_handling(std::string_view text) {
  for (auto h : {ConflictHandling::Drop, ConflictHandling::PreferPositive, ConflictHandling::PreferNegative}) {
    if (text == to_string(h)) return h;
  }
  return std::nullopt;
}

namespace {

bool by_nodes(const InferredPair& x, const InferredPair& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); }

}  // namespace

PositiveInference infer_positive_pairs(const ParaphraseGraph& graph, const ClusterIndex& index,
                                       std::optional<std::size_t> max_cluster_pairs, bool with_witnesses) {
  PositiveInference result;
  std::vector<InferredPair> block;
  for (ClusterId c = 0; c < index.cluster_count(); ++c) {
    auto members = index.members(c);
    if (members.size() < 2) continue;
    block.clear();
    // Members are ascending, so the block comes out in (a, b) order.
    std::size_t candidates = 0;
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        if (graph.sign_between(members[i], members[j])) continue;
        ++candidates;
        if (max_cluster_pairs && block.size() >= *max_cluster_pairs) continue;
        block.push_back({members[i], members[j], Label::Positive, Provenance::InferredPositive, PositiveBasis{c, {}}});
      }
    }
    if (max_cluster_pairs && candidates > *max_cluster_pairs) {
      result.truncations.push_back({c, members.size(), candidates, block.size()});
    }
    if (with_witnesses) {
      // One BFS tree per source node covers all of its pairs in the block.
      std::optional<PositivePathTree> tree;
      std::optional<NodeId> tree_source;
      for (InferredPair& p : block) {
        if (tree_source != p.a) {
          tree.emplace(graph, p.a);
          tree_source = p.a;
        }
        std::get<PositiveBasis>(p.basis).witness = tree->path_to(p.b);
      }
    }
    result.pairs.insert(result.pairs.end(), std::make_move_iterator(block.begin()),
                        std::make_move_iterator(block.end()));
  }
  std::sort(result.pairs.begin(), result.pairs.end(), by_nodes);
  return result;
}

std::vector<InferredPair> infer_negative_pairs(const ParaphraseGraph& graph, const ClusterIndex& index) {
  struct Link {
    ClusterId low;
    ClusterId high;
    NodeId edge_a;
    NodeId edge_b;
  };
  std::vector<Link> links;
  for (const SignedEdge& e : graph.edges()) {
    if (e.sign != Label::Negative) continue;
    const ClusterId ca = index.cluster_of(e.a);
    const ClusterId cb = index.cluster_of(e.b);
    if (ca == cb) continue;
    links.push_back({std::min(ca, cb), std::max(ca, cb), e.a, e.b});
  }
  // Stable: edges arrive in (a, b) order, so the first link per cluster pair
  // is its smallest edge.
  std::stable_sort(links.begin(), links.end(),
                   [](const Link& x, const Link& y) { return std::tie(x.low, x.high) < std::tie(y.low, y.high); });
  links.erase(std::unique(links.begin(), links.end(),
                          [](const Link& x, const Link& y) { return x.low == y.low && x.high == y.high; }),
              links.end());

  std::vector<InferredPair> result;
  for (const Link& link : links) {
    for (NodeId x : index.members(link.low)) {
      for (NodeId y : index.members(link.high)) {
        if (graph.sign_between(x, y)) continue;
        const NodeId a = std::min(x, y);
        const NodeId b = std::max(x, y);
        NegativeBasis basis{link.edge_a, link.edge_b, index.cluster_of(a), index.cluster_of(b)};
        result.push_back({a, b, Label::Negative, Provenance::InferredNegative, basis});
      }
    }
  }
  std::sort(result.begin(), result.end(), by_nodes);
  return result;
}

AugmentationResult merge_inferred(const LabeledDataset& dataset, std::vector<InferredPair> positives,
                                  std::vector<InferredPair> negatives, ConflictHandling handling) {
  AugmentationResult result;
  AugmentationReport& report = result.report;
  report.input_pairs = dataset.pairs.size();
  report.handling = handling;

  std::vector<InferredPair>& inferred = result.inferred;
  inferred.reserve(positives.size() + negatives.size());
  auto p = positives.begin();
  auto n = negatives.begin();
  while (p != positives.end() || n != negatives.end()) {
    if (n == negatives.end() || (p != positives.end() && by_nodes(*p, *n))) {
      inferred.push_back(std::move(*p++));
    } else if (p == positives.end() || by_nodes(*n, *p)) {
      inferred.push_back(std::move(*n++));
    } else {
      ++report.conflicted_pairs;
      if (handling == ConflictHandling::PreferPositive) inferred.push_back(std::move(*p));
      if (handling == ConflictHandling::PreferNegative) inferred.push_back(std::move(*n));
      ++p;
      ++n;
    }
  }

  LabeledDataset& out = result.dataset;
  out.split = dataset.split;
  out.sentences = dataset.sentences;
  out.pairs.reserve(dataset.pairs.size() + inferred.size());
  auto original = dataset.pairs.begin();
  for (const InferredPair& pair : inferred) {
    while (original != dataset.pairs.end() && std::tie(original->a, original->b) < std::tie(pair.a, pair.b)) {
      out.pairs.push_back(*original++);
    }
    if (original != dataset.pairs.end() && original->a == pair.a && original->b == pair.b) {
      throw DatasetError("inferred pair (" + std::to_string(pair.a) + ", " + std::to_string(pair.b) +
                         ") already carries a label");
    }
    LabeledPair added;
    added.a = pair.a;
    added.b = pair.b;
    added.label = pair.label;
    added.provenance = pair.provenance;
    out.pairs.push_back(std::move(added));
    ++(pair.label == Label::Positive ? report.inferred_positive : report.inferred_negative);
  }
  out.pairs.insert(out.pairs.end(), original, dataset.pairs.end());
  report.output_stats = compute_stats(out);
  return result;
}

AugmentationResult augment_dataset(const LabeledDataset& dataset, const AugmentationPolicy& policy) {
  const ParaphraseGraph graph = build_graph(dataset);
  const ClusterIndex index = positive_components(graph);

  PositiveInference positives;
  if (policy.infer_positives) {
    positives = infer_positive_pairs(graph, index, policy.max_cluster_pairs, policy.with_witnesses);
  }
  std::vector<InferredPair> negatives;
  if (policy.infer_negatives) negatives = infer_negative_pairs(graph, index);

  AugmentationResult result =
      merge_inferred(dataset, std::move(positives.pairs), std::move(negatives), policy.conflicted_pair_handling);
  result.report.truncations = std::move(positives.truncations);
  return result;
}

}  // namespace paragraph

#include "paragraph/balance_checker.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <tuple>

namespace paragraph {

std::string_view to_string(BalanceClass balance) {
  switch (balance) {
    case BalanceClass::Balanced:
      return "balanced";
    case BalanceClass::WeaklyBalanced:
      return "weakly_balanced";
    case BalanceClass::Imbalanced:
      return "imbalanced";
  }
  return "unknown";
}

BalanceClass classify_triad(const std::array<Label, 3>& signs) {
  const auto negatives = std::count(signs.begin(), signs.end(), Label::Negative);
  if (negatives % 2 == 0) return BalanceClass::Balanced;
  return negatives == 3 ? BalanceClass::WeaklyBalanced : BalanceClass::Imbalanced;
}

ConflictReport detect_conflicts(const ParaphraseGraph& graph, const ClusterIndex& index, Split split) {
  if (index.node_count() != graph.node_count()) {
    throw DatasetError("cluster index does not match the graph");
  }
  ConflictReport report;
  report.split = split;
  // Edges are already sorted by (a, b).
  for (const SignedEdge& e : graph.edges()) {
    if (e.sign != Label::Negative || !index.same_cluster(e.a, e.b)) continue;
    auto witness = shortest_positive_path(graph, e.a, e.b);
    if (!witness) throw DatasetError("cluster index disagrees with positive reachability");
    report.conflicts.push_back({e.a, e.b, std::move(*witness), index.cluster_of(e.a)});
  }
  return report;
}

bool is_weakly_balanced(const ParaphraseGraph& graph, const ClusterIndex& index) {
  return std::none_of(graph.edges().begin(), graph.edges().end(), [&](const SignedEdge& e) {
    return e.sign == Label::Negative && index.same_cluster(e.a, e.b);
  });
}

FlipResult flip_conflicts(const LabeledDataset& dataset, const ConflictReport& report) {
  FlipResult result;
  result.dataset.split = dataset.split;
  result.dataset.sentences = dataset.sentences;
  std::vector<LabeledPair>& pairs = result.dataset.pairs;
  pairs = dataset.pairs;

  auto by_nodes = [](const LabeledPair& x, const LabeledPair& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); };
  std::stable_sort(pairs.begin(), pairs.end(), by_nodes);

  std::vector<char> flipped(pairs.size(), 0);
  for (const Conflict& c : report.conflicts) {
    LabeledPair key;
    key.a = std::min(c.a, c.b);
    key.b = std::max(c.a, c.b);
    auto [first, last] = std::equal_range(pairs.begin(), pairs.end(), key, by_nodes);
    bool any = false;
    for (auto it = first; it != last; ++it) {
      auto& flag = flipped[static_cast<std::size_t>(it - pairs.begin())];
      if (it->label != Label::Negative || flag) continue;
      flag = 1;
      it->label = Label::Positive;
      it->provenance = Provenance::Flipped;
      any = true;
    }
    if (any) {
      result.log.flipped.push_back({key.a, key.b, Label::Negative, Label::Positive});
    } else if (std::none_of(first, last, [](const LabeledPair& p) { return p.provenance == Provenance::Flipped; })) {
      throw DatasetError("conflict (" + std::to_string(key.a) + ", " + std::to_string(key.b) +
                         ") has no negative pair in the dataset");
    }
  }

  // A dataset assembled outside parse_dataset may still hold the same pair
  // twice; a flipped copy that now duplicates a positive one is folded in.
  std::vector<LabeledPair> kept;
  kept.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    LabeledPair& pair = pairs[i];
    if (!kept.empty() && kept.back().a == pair.a && kept.back().b == pair.b) {
      LabeledPair& prev = kept.back();
      if (prev.label != pair.label) {
        throw DatasetError("pair (" + std::to_string(pair.a) + ", " + std::to_string(pair.b) +
                           ") carries both labels");
      }
      // Keep the unflipped record; the other copy is absorbed into it.
      if (prev.provenance == Provenance::Flipped && pair.provenance != Provenance::Flipped) std::swap(prev, pair);
      prev.row_ids.insert(prev.row_ids.end(), pair.row_ids.begin(), pair.row_ids.end());
      std::sort(prev.row_ids.begin(), prev.row_ids.end());
      prev.row_ids.erase(std::unique(prev.row_ids.begin(), prev.row_ids.end()), prev.row_ids.end());
      const Label old_sign = pair.provenance == Provenance::Flipped ? Label::Negative : pair.label;
      result.log.merged.push_back({pair.a, pair.b, old_sign, prev.label});
      continue;
    }
    kept.push_back(std::move(pair));
  }
  pairs = std::move(kept);
  return result;
}

}  // namespace paragraph

#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "paragraph/corpus_io.hpp"
#include "paragraph/signed_graph.hpp"

namespace paragraph {

struct PositiveBasis {
  ClusterId cluster = 0;
  std::optional<PositivePath> witness;  // filled only when requested
};

struct NegativeBasis {
  NodeId edge_a = 0;  // the negative edge that links the two clusters
  NodeId edge_b = 0;
  ClusterId cluster_a = 0;  // cluster of the inferred pair's `a`
  ClusterId cluster_b = 0;
};

struct InferredPair {
  NodeId a = 0;  // a < b; never an existing edge
  NodeId b = 0;
  Label label = Label::Positive;
  Provenance provenance = Provenance::InferredPositive;
  std::variant<PositiveBasis, NegativeBasis> basis;
};

enum class ConflictHandling { Drop, PreferPositive, PreferNegative };

std::string_view to_string(ConflictHandling handling);
std::optional<ConflictHandling> parse_conflict_handling(std::string_view text);

struct AugmentationPolicy {
  bool infer_positives = true;
  bool infer_negatives = true;
  ConflictHandling conflicted_pair_handling = ConflictHandling::Drop;
  // Per-cluster cap on inferred positives; the smallest (a, b) are kept.
  std::optional<std::size_t> max_cluster_pairs;
  bool with_witnesses = false;
};

struct TruncationEvent {
  ClusterId cluster = 0;
  std::size_t cluster_size = 0;
  std::size_t candidates = 0;
  std::size_t kept = 0;
};

struct PositiveInference {
  std::vector<InferredPair> pairs;  // sorted by (a, b)
  std::vector<TruncationEvent> truncations;
};

// Transitive closure inside each cluster: every unlabeled pair of members.
PositiveInference infer_positive_pairs(const ParaphraseGraph& graph, const ClusterIndex& index,
                                       std::optional<std::size_t> max_cluster_pairs = std::nullopt,
                                       bool with_witnesses = false);

// Every unlabeled pair across two distinct clusters that some negative edge
// already joins. Each cluster pair is expanded once, attributed to its
// smallest linking edge.
std::vector<InferredPair> infer_negative_pairs(const ParaphraseGraph& graph, const ClusterIndex& index);

struct AugmentationReport {
  std::size_t input_pairs = 0;
  std::size_t inferred_positive = 0;  // after conflict handling and caps
  std::size_t inferred_negative = 0;
  std::size_t conflicted_pairs = 0;   // produced by both rules
  ConflictHandling handling = ConflictHandling::Drop;
  std::vector<TruncationEvent> truncations;
  DatasetStats output_stats;
};

struct AugmentationResult {
  LabeledDataset dataset;
  AugmentationReport report;
  std::vector<InferredPair> inferred;  // what was added, sorted by (a, b)
};

// Original pairs keep their labels; `positives` and `negatives` are added,
// with any pair present in both resolved by `handling`. Both lists must be
// sorted by (a, b).
AugmentationResult merge_inferred(const LabeledDataset& dataset, std::vector<InferredPair> positives,
                                  std::vector<InferredPair> negatives, ConflictHandling handling);

AugmentationResult augment_dataset(const LabeledDataset& dataset, const AugmentationPolicy& policy);

}  // namespace paragraph

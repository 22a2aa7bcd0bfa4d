#pragma once

#include <array>
#include <vector>

#include "paragraph/corpus_io.hpp"
#include "paragraph/signed_graph.hpp"

namespace paragraph {

enum class BalanceClass { Balanced, WeaklyBalanced, Imbalanced };

std::string_view to_string(BalanceClass balance);

// Sign product of a 3-cycle: positive is balanced; three negatives are only
// weakly balanced; a single negative is imbalanced.
BalanceClass classify_triad(const std::array<Label, 3>& signs);

// A negative edge whose endpoints are joined by a positive path.
struct Conflict {
  NodeId a = 0;  // a < b
  NodeId b = 0;
  PositivePath witness;  // from a to b
  ClusterId cluster = 0;
};

struct ConflictReport {
  Split split = Split::Train;
  std::vector<Conflict> conflicts;  // sorted by (a, b)

  bool empty() const { return conflicts.empty(); }
};

// Every negative edge inside a paraphrase cluster, with its shortest
// positive witness. Negative edges between clusters are tolerated: an
// all-negative cycle says nothing about which pair should be paraphrases.
ConflictReport detect_conflicts(const ParaphraseGraph& graph, const ClusterIndex& index,
                                Split split = Split::Train);

bool is_weakly_balanced(const ParaphraseGraph& graph, const ClusterIndex& index);

struct FlipEntry {
  NodeId a = 0;
  NodeId b = 0;
  Label old_sign = Label::Negative;
  Label new_sign = Label::Positive;
};

struct FlipLog {
  std::vector<FlipEntry> flipped;
  // Flipped pairs that collapsed into an already present positive pair.
  std::vector<FlipEntry> merged;
};

struct FlipResult {
  LabeledDataset dataset;
  FlipLog log;
};

// Relabels each conflicted pair Positive with provenance Flipped. Throws
// DatasetError if the report names a pair that is absent or not negative.
FlipResult flip_conflicts(const LabeledDataset& dataset, const ConflictReport& report);

}  // namespace paragraph

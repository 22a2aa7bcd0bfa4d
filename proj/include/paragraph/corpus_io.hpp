#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "paragraph/errors.hpp"

namespace paragraph {

using NodeId = std::uint32_t;

enum class Label : std::uint8_t { Negative = 0, Positive = 1 };

enum class Provenance : std::uint8_t { Original, InferredPositive, InferredNegative, Flipped };

enum class Split : std::uint8_t { Train, Test };

std::string_view to_string(Label label);
std::string_view to_string(Provenance provenance);
std::string_view to_string(Split split);
std::optional<Provenance> parse_provenance(std::string_view text);
std::optional<Split> parse_split(std::string_view text);

inline Label opposite(Label label) {
  return label == Label::Positive ? Label::Negative : Label::Positive;
}

struct Sentence {
  NodeId node_id = 0;
  std::string text;
  // External ids (e.g. QQP qid values) that mapped onto this text, sorted.
  std::vector<std::string> source_ids;
};

struct LabeledPair {
  NodeId a = 0;  // a < b
  NodeId b = 0;
  Label label = Label::Negative;
  Provenance provenance = Provenance::Original;
  std::vector<std::string> row_ids;  // sorted, unique

  friend bool operator==(const LabeledPair&, const LabeledPair&) = default;
};

// One split of a sentence-pair corpus. `sentences[i].node_id == i` and
// `pairs` is kept sorted by (a, b) with at most one entry per node pair.
struct LabeledDataset {
  Split split = Split::Train;
  std::vector<Sentence> sentences;
  std::vector<LabeledPair> pairs;

  const std::string& text(NodeId node) const { return sentences.at(node).text; }

  // Throws DatasetError describing the first violated invariant.
  void validate() const;
};

// Builds a canonical LabeledPair for two distinct nodes in either order.
LabeledPair make_pair(NodeId x, NodeId y, Label label, Provenance provenance = Provenance::Original);

struct DatasetStats {
  std::size_t n_positive = 0;
  std::size_t n_negative = 0;
  std::optional<double> positive_ratio;  // percent; absent for empty datasets
  std::map<Provenance, std::size_t> n_by_provenance;

  std::size_t total() const { return n_positive + n_negative; }
};

DatasetStats compute_stats(const LabeledDataset& dataset);

// Trims surrounding whitespace and collapses internal whitespace runs to one
// space. Case and punctuation are untouched. Throws UnusableSentence when
// nothing remains.
std::string canonicalize_sentence(std::string_view raw);

// Where a column lives: looked up by `name` when the table has a header,
// otherwise taken at `position`.
struct ColumnSpec {
  std::string name;
  std::size_t position = 0;
};

struct FormatConfig {
  char delimiter = '\t';
  bool has_header = true;
  // Fields beginning with this character are quoted; "" escapes it inside.
  std::optional<char> quote = '"';

  ColumnSpec text_a;
  ColumnSpec text_b;
  ColumnSpec label;
  std::optional<ColumnSpec> row_id;
  std::optional<ColumnSpec> source_id_a;
  std::optional<ColumnSpec> source_id_b;

  // id, qid1, qid2, question1, question2, is_duplicate
  static FormatConfig qqp();
  // sentence1, sentence2, label
  static FormatConfig generic();
};

inline constexpr std::string_view kProvenanceColumn = "provenance";

struct RowError {
  std::size_t line = 0;  // 1-based physical line where the record starts
  std::string message;
};

struct MergedDuplicate {
  std::string text_a;
  std::string text_b;
  Label label = Label::Negative;
  std::vector<std::string> row_ids;
};

// The same unordered pair appeared with both labels; it is excluded.
struct RawDuplicateConflict {
  std::string text_a;
  std::string text_b;
  std::vector<std::pair<std::string, Label>> rows;  // (row id, label), sorted
};

struct SelfPairEntry {
  std::string row_id;
  std::string text;
  Label label = Label::Negative;
  bool anomalous = false;  // negative self-pairs contradict reflexivity
};

struct ParseReport {
  std::size_t records = 0;        // data records seen (header excluded)
  std::size_t accepted_rows = 0;  // records that contributed to a retained pair
  std::size_t merged_rows = 0;    // records folded into an existing identical pair
  std::size_t orphaned_sentences = 0;
  std::vector<RowError> errors;
  std::vector<MergedDuplicate> merged;
  std::vector<RawDuplicateConflict> raw_conflicts;
  std::vector<SelfPairEntry> self_pairs;
};

struct ParseResult {
  LabeledDataset dataset;
  ParseReport report;
};

// Reads a delimited table into a deduplicated dataset. Per-row problems land
// in the report; an unreadable stream throws IoError and a header missing a
// mapped column throws FormatError.
ParseResult parse_dataset(std::istream& source, const FormatConfig& format, Split split = Split::Train);

// Writes one row per pair, sorted by (a, b), with a trailing provenance
// column. Returns the number of data rows.
std::size_t write_dataset(const LabeledDataset& dataset, std::ostream& sink, const FormatConfig& format);

}  // namespace paragraph

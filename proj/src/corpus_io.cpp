#include "paragraph/corpus_io.hpp"

#include <algorithm>
#include <array>
#include <tuple>
#include <istream>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "paragraph/delimited.hpp"

namespace paragraph {

std::string_view to_string(Label label) {
  return label == Label::Positive ? "positive" : "negative";
}

std::string_view to_string(Provenance provenance) {
  switch (provenance) {
    case Provenance::Original:
      return "original";
    case Provenance::InferredPositive:
      return "inferred_positive";
    case Provenance::InferredNegative:
      return "inferred_negative";
    case Provenance::Flipped:
      return "flipped";
  }
  return "unknown";
}

std::string_view to_string(Split split) { return split == Split::Train ? "train" : "test"; }

std::optional<Provenance> parse_provenance(std::string_view text) {
  for (auto p : {Provenance::Original, Provenance::InferredPositive, Provenance::InferredNegative,
                 Provenance::Flipped}) {
    if (text == to_string(p)) return p;
  }
  return std::nullopt;
}

std::optional<Split> parse_split(std::string_view text) {
  if (text == "train") return Split::Train;
  if (text == "test") return Split::Test;
  return std::nullopt;
}

LabeledPair make_pair(NodeId x, NodeId y, Label label, Provenance provenance) {
  if (x == y) throw DatasetError("self-pair on node " + std::to_string(x));
  LabeledPair pair;
  pair.a = std::min(x, y);
  pair.b = std::max(x, y);
  pair.label = label;
  pair.provenance = provenance;
  return pair;
}

namespace {

bool provenance_allows(Provenance provenance, Label label) {
  switch (provenance) {
    case Provenance::InferredNegative:
      return label == Label::Negative;
    case Provenance::InferredPositive:
    case Provenance::Flipped:
      return label == Label::Positive;
    case Provenance::Original:
      return true;
  }
  return false;
}

std::string pair_name(const LabeledPair& pair) {
  return "(" + std::to_string(pair.a) + ", " + std::to_string(pair.b) + ")";
}

}  // namespace

void LabeledDataset::validate() const {
  std::unordered_set<std::string_view> texts;
  texts.reserve(sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const Sentence& s = sentences[i];
    if (s.node_id != i) throw DatasetError("sentence at index " + std::to_string(i) + " has node_id " + std::to_string(s.node_id));
    if (s.text.empty()) throw DatasetError("sentence " + std::to_string(i) + " has empty text");
    if (!texts.insert(s.text).second) throw DatasetError("duplicate sentence text: " + s.text);
  }
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const LabeledPair& p = pairs[i];
    if (p.a >= p.b) throw DatasetError("pair " + pair_name(p) + " is not in canonical order");
    if (p.b >= sentences.size()) throw DatasetError("pair " + pair_name(p) + " references an unknown sentence");
    if (!provenance_allows(p.provenance, p.label)) {
      throw DatasetError("pair " + pair_name(p) + " has label " + std::string(to_string(p.label)) +
                         " inconsistent with provenance " + std::string(to_string(p.provenance)));
    }
    if (i > 0) {
      const LabeledPair& q = pairs[i - 1];
      if (std::tie(q.a, q.b) >= std::tie(p.a, p.b)) {
        throw DatasetError("pairs not strictly sorted at " + pair_name(p) + " (duplicate or out of order)");
      }
    }
  }
}

DatasetStats compute_stats(const LabeledDataset& dataset) {
  DatasetStats stats;
  for (const LabeledPair& pair : dataset.pairs) {
    (pair.label == Label::Positive ? stats.n_positive : stats.n_negative) += 1;
    stats.n_by_provenance[pair.provenance] += 1;
  }
  if (stats.total() > 0) {
    stats.positive_ratio = 100.0 * static_cast<double>(stats.n_positive) / static_cast<double>(stats.total());
  }
  return stats;
}

namespace {

constexpr bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

}  // namespace

std::string canonicalize_sentence(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (char c : raw) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  if (out.empty()) throw UnusableSentence("sentence is empty after whitespace normalization");
  return out;
}

FormatConfig FormatConfig::qqp() {
  FormatConfig f;
  f.row_id = ColumnSpec{"id", 0};
  f.source_id_a = ColumnSpec{"qid1", 1};
  f.source_id_b = ColumnSpec{"qid2", 2};
  f.text_a = {"question1", 3};
  f.text_b = {"question2", 4};
  f.label = {"is_duplicate", 5};
  return f;
}

FormatConfig FormatConfig::generic() {
  FormatConfig f;
  f.text_a = {"sentence1", 0};
  f.text_b = {"sentence2", 1};
  f.label = {"label", 2};
  return f;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Resolved column positions for one input table.
struct Layout {
  std::size_t text_a = 0;
  std::size_t text_b = 0;
  std::size_t label = 0;
  std::optional<std::size_t> row_id;
  std::optional<std::size_t> source_id_a;
  std::optional<std::size_t> source_id_b;
  std::optional<std::size_t> provenance;
  std::size_t width = 0;      // expected column count
  bool provenance_optional = false;  // headerless: a trailing extra column
};

std::size_t find_column(const std::vector<std::string>& header, const ColumnSpec& spec) {
  auto it = std::find_if(header.begin(), header.end(),
                         [&](const std::string& name) { return trim(name) == spec.name; });
  if (it == header.end()) throw FormatError("header has no column named '" + spec.name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

Layout layout_from_header(const std::vector<std::string>& header, const FormatConfig& format) {
  Layout layout;
  layout.text_a = find_column(header, format.text_a);
  layout.text_b = find_column(header, format.text_b);
  layout.label = find_column(header, format.label);
  auto optional_column = [&](const std::optional<ColumnSpec>& spec) -> std::optional<std::size_t> {
    if (!spec) return std::nullopt;
    return find_column(header, *spec);
  };
  layout.row_id = optional_column(format.row_id);
  layout.source_id_a = optional_column(format.source_id_a);
  layout.source_id_b = optional_column(format.source_id_b);
  auto prov = std::find_if(header.begin(), header.end(),
                           [](const std::string& name) { return trim(name) == kProvenanceColumn; });
  if (prov != header.end()) layout.provenance = static_cast<std::size_t>(prov - header.begin());
  layout.width = header.size();
  return layout;
}

Layout layout_from_positions(const FormatConfig& format) {
  Layout layout;
  layout.text_a = format.text_a.position;
  layout.text_b = format.text_b.position;
  layout.label = format.label.position;
  std::size_t widest = std::max({layout.text_a, layout.text_b, layout.label});
  auto optional_column = [&](const std::optional<ColumnSpec>& spec) -> std::optional<std::size_t> {
    if (!spec) return std::nullopt;
    widest = std::max(widest, spec->position);
    return spec->position;
  };
  layout.row_id = optional_column(format.row_id);
  layout.source_id_a = optional_column(format.source_id_a);
  layout.source_id_b = optional_column(format.source_id_b);
  layout.width = widest + 1;
  layout.provenance_optional = true;
  return layout;
}

struct RowRecord {
  std::string row_id;
  Label label = Label::Negative;
  Provenance provenance = Provenance::Original;
};

struct PairAccumulator {
  std::vector<RowRecord> rows;
  bool seen_positive = false;
  bool seen_negative = false;
};

std::uint64_t pair_key(NodeId a, NodeId b) { return (static_cast<std::uint64_t>(a) << 32) | b; }

class Interner {
 public:
  NodeId intern(std::string text, std::string_view source_id) {
    auto [it, inserted] = ids_.try_emplace(text, static_cast<NodeId>(sentences_.size()));
    if (inserted) {
      Sentence s;
      s.node_id = it->second;
      s.text = std::move(text);
      sentences_.push_back(std::move(s));
    }
    if (!source_id.empty()) sentences_[it->second].source_ids.emplace_back(source_id);
    return it->second;
  }

  std::vector<Sentence>& sentences() { return sentences_; }

 private:
  std::unordered_map<std::string, NodeId> ids_;
  std::vector<Sentence> sentences_;
};

void sort_unique(std::vector<std::string>& values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
}

}  // namespace

ParseResult parse_dataset(std::istream& source, const FormatConfig& format, Split split) {
  DelimitedReader reader(source, format.delimiter, format.quote);
  ParseResult result;
  ParseReport& report = result.report;
  result.dataset.split = split;

  std::vector<std::string> fields;
  Layout layout;
  if (format.has_header) {
    if (!reader.next(fields)) return result;
    layout = layout_from_header(fields, format);
  } else {
    layout = layout_from_positions(format);
  }

  Interner interner;
  std::unordered_map<std::uint64_t, PairAccumulator> accumulators;

  while (reader.next(fields)) {
    const std::size_t line = reader.record_line();
    ++report.records;
    auto reject = [&](std::string message) { report.errors.push_back({line, std::move(message)}); };

    if (reader.unterminated_quote()) {
      reject("unterminated quoted field");
      continue;
    }
    if (fields.size() == 1 && trim(fields[0]).empty()) {
      --report.records;  // blank line
      continue;
    }
    std::optional<std::size_t> provenance_column = layout.provenance;
    if (layout.provenance_optional && fields.size() == layout.width + 1) {
      provenance_column = layout.width;
    } else if (fields.size() != layout.width) {
      reject("expected " + std::to_string(layout.width) + " columns, found " + std::to_string(fields.size()));
      continue;
    }

    const std::string_view label_text = trim(fields[layout.label]);
    Label label;
    if (label_text == "1") {
      label = Label::Positive;
    } else if (label_text == "0") {
      label = Label::Negative;
    } else {
      reject("non-binary label '" + std::string(label_text) + "'");
      continue;
    }

    Provenance provenance = Provenance::Original;
    if (provenance_column) {
      const std::string_view text = trim(fields[*provenance_column]);
      if (!text.empty()) {
        auto parsed = parse_provenance(text);
        if (!parsed) {
          reject("unknown provenance '" + std::string(text) + "'");
          continue;
        }
        provenance = *parsed;
      }
      if (!provenance_allows(provenance, label)) {
        reject("provenance '" + std::string(to_string(provenance)) + "' contradicts label " +
               std::string(label_text));
        continue;
      }
    }

    std::string text_a;
    std::string text_b;
    try {
      text_a = canonicalize_sentence(fields[layout.text_a]);
      text_b = canonicalize_sentence(fields[layout.text_b]);
    } catch (const UnusableSentence&) {
      reject("empty sentence");
      continue;
    }

    std::string row_id;
    if (layout.row_id) row_id = std::string(trim(fields[*layout.row_id]));
    if (row_id.empty()) row_id = "#" + std::to_string(line);
    const std::string_view source_a = layout.source_id_a ? trim(fields[*layout.source_id_a]) : std::string_view{};
    const std::string_view source_b = layout.source_id_b ? trim(fields[*layout.source_id_b]) : std::string_view{};

    const NodeId a = interner.intern(std::move(text_a), source_a);
    const NodeId b = interner.intern(std::move(text_b), source_b);
    if (a == b) {
      report.self_pairs.push_back({row_id, interner.sentences()[a].text, label, label == Label::Negative});
      continue;
    }

    PairAccumulator& acc = accumulators[pair_key(std::min(a, b), std::max(a, b))];
    (label == Label::Positive ? acc.seen_positive : acc.seen_negative) = true;
    acc.rows.push_back({std::move(row_id), label, provenance});
  }

  std::vector<Sentence>& sentences = interner.sentences();
  std::vector<LabeledPair> pairs;
  pairs.reserve(accumulators.size());
  for (auto& [key, acc] : accumulators) {
    const auto a = static_cast<NodeId>(key >> 32);
    const auto b = static_cast<NodeId>(key & 0xffffffffu);
    if (acc.seen_positive && acc.seen_negative) {
      RawDuplicateConflict conflict;
      conflict.text_a = sentences[a].text;
      conflict.text_b = sentences[b].text;
      for (RowRecord& row : acc.rows) conflict.rows.emplace_back(std::move(row.row_id), row.label);
      std::sort(conflict.rows.begin(), conflict.rows.end());
      report.raw_conflicts.push_back(std::move(conflict));
      continue;
    }
    LabeledPair pair;
    pair.a = a;
    pair.b = b;
    pair.label = acc.rows.front().label;
    pair.provenance = acc.rows.front().provenance;
    for (RowRecord& row : acc.rows) {
      pair.provenance = std::min(pair.provenance, row.provenance);
      pair.row_ids.push_back(std::move(row.row_id));
    }
    sort_unique(pair.row_ids);
    report.accepted_rows += acc.rows.size();
    if (acc.rows.size() > 1) {
      report.merged_rows += acc.rows.size() - 1;
      report.merged.push_back({sentences[a].text, sentences[b].text, pair.label, pair.row_ids});
    }
    pairs.push_back(std::move(pair));
  }

  // Drop sentences that only occurred in rejected rows, keeping first-seen order.
  std::vector<char> referenced(sentences.size(), 0);
  for (const LabeledPair& pair : pairs) referenced[pair.a] = referenced[pair.b] = 1;
  std::vector<NodeId> remap(sentences.size(), 0);
  LabeledDataset& dataset = result.dataset;
  for (std::size_t old_id = 0; old_id < sentences.size(); ++old_id) {
    if (!referenced[old_id]) {
      ++report.orphaned_sentences;
      continue;
    }
    remap[old_id] = static_cast<NodeId>(dataset.sentences.size());
    Sentence s = std::move(sentences[old_id]);
    s.node_id = remap[old_id];
    sort_unique(s.source_ids);
    dataset.sentences.push_back(std::move(s));
  }
  for (LabeledPair& pair : pairs) {
    pair.a = remap[pair.a];
    pair.b = remap[pair.b];
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const LabeledPair& x, const LabeledPair& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
  dataset.pairs = std::move(pairs);

  std::sort(report.merged.begin(), report.merged.end(), [](const auto& x, const auto& y) {
    return std::tie(x.text_a, x.text_b) < std::tie(y.text_a, y.text_b);
  });
  std::sort(report.raw_conflicts.begin(), report.raw_conflicts.end(), [](const auto& x, const auto& y) {
    return std::tie(x.text_a, x.text_b) < std::tie(y.text_a, y.text_b);
  });
  return result;
}

namespace {

enum class Role { RowId, SourceA, SourceB, TextA, TextB, Label };

}  // namespace

std::size_t write_dataset(const LabeledDataset& dataset, std::ostream& sink, const FormatConfig& format) {
  dataset.validate();

  std::vector<std::pair<const ColumnSpec*, Role>> columns = {
      {&format.text_a, Role::TextA}, {&format.text_b, Role::TextB}, {&format.label, Role::Label}};
  if (format.row_id) columns.emplace_back(&*format.row_id, Role::RowId);
  if (format.source_id_a) columns.emplace_back(&*format.source_id_a, Role::SourceA);
  if (format.source_id_b) columns.emplace_back(&*format.source_id_b, Role::SourceB);
  std::stable_sort(columns.begin(), columns.end(),
                   [](const auto& x, const auto& y) { return x.first->position < y.first->position; });

  if (!format.quote) {
    for (const Sentence& s : dataset.sentences) {
      if (s.text.find(format.delimiter) != std::string::npos) {
        throw DatasetError("sentence contains the delimiter and quoting is disabled: " + s.text);
      }
    }
  }

  std::vector<std::string_view> row;
  row.reserve(columns.size() + 1);
  if (format.has_header) {
    for (const auto& column : columns) row.push_back(column.first->name);
    row.push_back(kProvenanceColumn);
    write_delimited_row(sink, row, format.delimiter, format.quote);
  }

  static const std::string kEmpty;
  auto first_or_empty = [](const std::vector<std::string>& values) -> const std::string& {
    return values.empty() ? kEmpty : values.front();
  };

  for (const LabeledPair& pair : dataset.pairs) {
    row.clear();
    for (const auto& column : columns) {
      switch (column.second) {
        case Role::RowId:
          row.push_back(first_or_empty(pair.row_ids));
          break;
        case Role::SourceA:
          row.push_back(first_or_empty(dataset.sentences[pair.a].source_ids));
          break;
        case Role::SourceB:
          row.push_back(first_or_empty(dataset.sentences[pair.b].source_ids));
          break;
        case Role::TextA:
          row.push_back(dataset.sentences[pair.a].text);
          break;
        case Role::TextB:
          row.push_back(dataset.sentences[pair.b].text);
          break;
        case Role::Label:
          row.push_back(pair.label == Label::Positive ? "1" : "0");
          break;
      }
    }
    row.push_back(to_string(pair.provenance));
    write_delimited_row(sink, row, format.delimiter, format.quote);
  }
  sink.flush();
  if (!sink) throw IoError("write failure on output stream");
  return dataset.pairs.size();
}

}  // namespace paragraph

#include "paragraph/reports.hpp"

#include <iomanip>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace paragraph {

using nlohmann::json;

std::string_view report_extension(ReportFormat format) {
  return format == ReportFormat::Text ? "txt" : "json";
}

std::optional<ReportFormat> parse_report_format(std::string_view text) {
  if (text == "text") return ReportFormat::Text;
  if (text == "structured") return ReportFormat::Structured;
  return std::nullopt;
}

namespace {

json stats_json(const DatasetStats& stats) {
  json j;
  j["paraphrase"] = stats.n_positive;
  j["non_paraphrase"] = stats.n_negative;
  j["total"] = stats.total();
  j["paraphrase_ratio"] = stats.positive_ratio ? json(*stats.positive_ratio) : json(nullptr);
  json by_provenance = json::object();
  for (const auto& [provenance, count] : stats.n_by_provenance) by_provenance[std::string(to_string(provenance))] = count;
  j["by_provenance"] = std::move(by_provenance);
  return j;
}

std::string format_ratio(const std::optional<double>& ratio) {
  if (!ratio) return "-";
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << *ratio;
  return s.str();
}

json path_texts(const PositivePath& path, const LabeledDataset& dataset) {
  json texts = json::array();
  for (NodeId v : path.nodes) texts.push_back(dataset.text(v));
  return texts;
}

}  // namespace

void write_parse_report(const ParseReport& report, Split split, std::ostream& out, ReportFormat format) {
  if (format == ReportFormat::Structured) {
    json j;
    j["split"] = to_string(split);
    j["records"] = report.records;
    j["accepted_rows"] = report.accepted_rows;
    j["merged_rows"] = report.merged_rows;
    j["orphaned_sentences"] = report.orphaned_sentences;
    json errors = json::array();
    for (const RowError& e : report.errors) errors.push_back({{"line", e.line}, {"message", e.message}});
    j["errors"] = std::move(errors);
    json merged = json::array();
    for (const MergedDuplicate& m : report.merged) {
      merged.push_back({{"text_a", m.text_a}, {"text_b", m.text_b}, {"label", to_string(m.label)}, {"row_ids", m.row_ids}});
    }
    j["merged_duplicates"] = std::move(merged);
    json conflicts = json::array();
    for (const RawDuplicateConflict& c : report.raw_conflicts) {
      json rows = json::array();
      for (const auto& [row_id, label] : c.rows) rows.push_back({{"row_id", row_id}, {"label", to_string(label)}});
      conflicts.push_back({{"text_a", c.text_a}, {"text_b", c.text_b}, {"rows", std::move(rows)}});
    }
    j["raw_duplicate_conflicts"] = std::move(conflicts);
    json self_pairs = json::array();
    for (const SelfPairEntry& s : report.self_pairs) {
      self_pairs.push_back(
          {{"row_id", s.row_id}, {"text", s.text}, {"label", to_string(s.label)}, {"anomalous", s.anomalous}});
    }
    j["self_pairs"] = std::move(self_pairs);
    out << j.dump(2) << '\n';
    return;
  }

  out << "split: " << to_string(split) << '\n'
      << "records: " << report.records << '\n'
      << "accepted_rows: " << report.accepted_rows << '\n'
      << "merged_rows: " << report.merged_rows << '\n'
      << "orphaned_sentences: " << report.orphaned_sentences << '\n'
      << "row_errors: " << report.errors.size() << '\n';
  for (const RowError& e : report.errors) out << "  line " << e.line << ": " << e.message << '\n';
  out << "merged_duplicates: " << report.merged.size() << '\n';
  for (const MergedDuplicate& m : report.merged) {
    out << "  [" << to_string(m.label) << "] rows";
    for (const std::string& id : m.row_ids) out << ' ' << id;
    out << "\n    a: " << m.text_a << "\n    b: " << m.text_b << '\n';
  }
  out << "raw_duplicate_conflicts: " << report.raw_conflicts.size() << '\n';
  for (const RawDuplicateConflict& c : report.raw_conflicts) {
    out << "  rows";
    for (const auto& [row_id, label] : c.rows) out << ' ' << row_id << '=' << (label == Label::Positive ? 1 : 0);
    out << "\n    a: " << c.text_a << "\n    b: " << c.text_b << '\n';
  }
  out << "self_pairs: " << report.self_pairs.size() << '\n';
  for (const SelfPairEntry& s : report.self_pairs) {
    out << "  row " << s.row_id << " [" << to_string(s.label) << (s.anomalous ? ", anomalous" : "") << "] " << s.text
        << '\n';
  }
}

void write_conflict_report(const ConflictReport& report, const LabeledDataset& dataset, std::ostream& out,
                           ReportFormat format) {
  if (format == ReportFormat::Structured) {
    json j;
    j["split"] = to_string(report.split);
    j["count"] = report.conflicts.size();
    json conflicts = json::array();
    for (const Conflict& c : report.conflicts) {
      conflicts.push_back({{"cluster", c.cluster},
                           {"a", c.a},
                           {"b", c.b},
                           {"text_a", dataset.text(c.a)},
                           {"text_b", dataset.text(c.b)},
                           {"witness_nodes", c.witness.nodes},
                           {"witness", path_texts(c.witness, dataset)}});
    }
    j["conflicts"] = std::move(conflicts);
    out << j.dump(2) << '\n';
    return;
  }

  out << "split: " << to_string(report.split) << '\n' << "conflicts: " << report.conflicts.size() << '\n';
  std::size_t number = 0;
  for (const Conflict& c : report.conflicts) {
    out << '\n'
        << ++number << ". cluster " << c.cluster << ", nodes (" << c.a << ", " << c.b << "), witness length "
        << c.witness.length() << '\n'
        << "   a: " << dataset.text(c.a) << '\n'
        << "   b: " << dataset.text(c.b) << '\n'
        << "   path:\n";
    for (NodeId v : c.witness.nodes) out << "     " << v << '\t' << dataset.text(v) << '\n';
  }
}

void write_flip_log(const FlipLog& log, const LabeledDataset& dataset, Split split, std::ostream& out,
                    ReportFormat format) {
  auto entry_json = [&](const FlipEntry& e) {
    return json{{"a", e.a},
                {"b", e.b},
                {"text_a", dataset.text(e.a)},
                {"text_b", dataset.text(e.b)},
                {"old", to_string(e.old_sign)},
                {"new", to_string(e.new_sign)}};
  };
  if (format == ReportFormat::Structured) {
    json j;
    j["split"] = to_string(split);
    json flipped = json::array();
    for (const FlipEntry& e : log.flipped) flipped.push_back(entry_json(e));
    json merged = json::array();
    for (const FlipEntry& e : log.merged) merged.push_back(entry_json(e));
    j["flipped"] = std::move(flipped);
    j["merged"] = std::move(merged);
    out << j.dump(2) << '\n';
    return;
  }
  out << "split: " << to_string(split) << '\n' << "flipped: " << log.flipped.size() << '\n';
  for (const FlipEntry& e : log.flipped) {
    out << "  (" << e.a << ", " << e.b << ") " << to_string(e.old_sign) << " -> " << to_string(e.new_sign) << '\n'
        << "    a: " << dataset.text(e.a) << '\n'
        << "    b: " << dataset.text(e.b) << '\n';
  }
  out << "merged: " << log.merged.size() << '\n';
  for (const FlipEntry& e : log.merged) out << "  (" << e.a << ", " << e.b << ")\n";
}

void write_augmentation_report(const AugmentationReport& report, Split split, std::ostream& out,
                               ReportFormat format) {
  if (format == ReportFormat::Structured) {
    json j;
    j["split"] = to_string(split);
    j["input_pairs"] = report.input_pairs;
    j["inferred_positive"] = report.inferred_positive;
    j["inferred_negative"] = report.inferred_negative;
    j["conflicted_pairs"] = report.conflicted_pairs;
    j["conflict_handling"] = to_string(report.handling);
    json truncations = json::array();
    for (const TruncationEvent& t : report.truncations) {
      truncations.push_back(
          {{"cluster", t.cluster}, {"cluster_size", t.cluster_size}, {"candidates", t.candidates}, {"kept", t.kept}});
    }
    j["truncations"] = std::move(truncations);
    j["output"] = stats_json(report.output_stats);
    out << j.dump(2) << '\n';
    return;
  }
  out << "split: " << to_string(split) << '\n'
      << "input_pairs: " << report.input_pairs << '\n'
      << "inferred_positive: " << report.inferred_positive << '\n'
      << "inferred_negative: " << report.inferred_negative << '\n'
      << "conflicted_pairs: " << report.conflicted_pairs << " (" << to_string(report.handling) << ")\n"
      << "truncations: " << report.truncations.size() << '\n';
  for (const TruncationEvent& t : report.truncations) {
    out << "  cluster " << t.cluster << " size " << t.cluster_size << ": kept " << t.kept << " of " << t.candidates
        << '\n';
  }
  out << "output_paraphrase: " << report.output_stats.n_positive << '\n'
      << "output_non_paraphrase: " << report.output_stats.n_negative << '\n'
      << "output_paraphrase_ratio: " << format_ratio(report.output_stats.positive_ratio) << '\n';
}

void write_stats_table(std::span<const StatsRow> rows, std::ostream& out, ReportFormat format) {
  if (format == ReportFormat::Structured) {
    json j = json::array();
    for (const StatsRow& row : rows) {
      json entry;
      entry["dataset"] = row.variant;
      entry["train"] = row.train ? stats_json(*row.train) : json(nullptr);
      entry["test"] = row.test ? stats_json(*row.test) : json(nullptr);
      j.push_back(std::move(entry));
    }
    out << j.dump(2) << '\n';
    return;
  }
  auto count = [](const std::optional<DatasetStats>& s, bool positive) -> std::string {
    if (!s) return "-";
    return std::to_string(positive ? s->n_positive : s->n_negative);
  };
  auto ratio = [](const std::optional<DatasetStats>& s) { return s ? format_ratio(s->positive_ratio) : "-"; };
  out << std::left << std::setw(20) << "dataset" << std::right << std::setw(18) << "train_paraphrase"
      << std::setw(22) << "train_non_paraphrase" << std::setw(17) << "test_paraphrase" << std::setw(21)
      << "test_non_paraphrase" << std::setw(13) << "train_ratio" << std::setw(12) << "test_ratio" << '\n';
  for (const StatsRow& row : rows) {
    out << std::left << std::setw(20) << row.variant << std::right << std::setw(18) << count(row.train, true)
        << std::setw(22) << count(row.train, false) << std::setw(17) << count(row.test, true) << std::setw(21)
        << count(row.test, false) << std::setw(13) << ratio(row.train) << std::setw(12) << ratio(row.test) << '\n';
  }
}

}  // namespace paragraph

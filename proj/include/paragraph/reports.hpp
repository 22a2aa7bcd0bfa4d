#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "paragraph/balance_checker.hpp"
#include "paragraph/corpus_io.hpp"
#include "paragraph/label_inference.hpp"

namespace paragraph {

// Text is line-oriented for people; Structured is JSON.
enum class ReportFormat { Text, Structured };

std::string_view report_extension(ReportFormat format);
std::optional<ReportFormat> parse_report_format(std::string_view text);

void write_parse_report(const ParseReport& report, Split split, std::ostream& out, ReportFormat format);

// One record per conflict: both sentence texts, the witness path as texts in
// order, and the cluster id.
void write_conflict_report(const ConflictReport& report, const LabeledDataset& dataset, std::ostream& out,
                           ReportFormat format);

void write_flip_log(const FlipLog& log, const LabeledDataset& dataset, Split split, std::ostream& out,
                    ReportFormat format);

void write_augmentation_report(const AugmentationReport& report, Split split, std::ostream& out,
                               ReportFormat format);

struct StatsRow {
  std::string variant;
  std::optional<DatasetStats> train;
  std::optional<DatasetStats> test;
};

// Paraphrase / non-paraphrase counts per split and the paraphrase ratio.
void write_stats_table(std::span<const StatsRow> rows, std::ostream& out, ReportFormat format);

}  // namespace paragraph

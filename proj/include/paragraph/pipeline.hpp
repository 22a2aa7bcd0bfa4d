#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "paragraph/balance_checker.hpp"
#include "paragraph/corpus_io.hpp"
#include "paragraph/label_inference.hpp"
#include "paragraph/reports.hpp"

namespace paragraph {

// Process exit status contract shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitConflictsFound = 3,
  kExitParseFailure = 4,
  kExitIoFailure = 5,
};

struct PipelineConfig {
  std::optional<std::filesystem::path> train_input;
  std::optional<std::filesystem::path> test_input;
  std::filesystem::path out_dir;  // optional for stats and check
  FormatConfig format = FormatConfig::qqp();
  AugmentationPolicy policy;
  bool flip = true;
  bool flip_before_infer = true;
  ReportFormat report_format = ReportFormat::Text;
  // Any malformed row fails the run instead of being skipped.
  bool strict = false;
  // Itemize differences from the published QQP counts in the run output.
  bool compare_reference = false;
  // Also write each split's signed graph as an edge list.
  bool export_graph = false;
};

struct Console {
  std::ostream& out;
  std::ostream& err;
};

int cmd_stats(const PipelineConfig& config, Console console);
int cmd_check(const PipelineConfig& config, Console console);
int cmd_flip(const PipelineConfig& config, Console console);
int cmd_augment(const PipelineConfig& config, Console console);
int cmd_pipeline(const PipelineConfig& config, Console console);

// Subdirectory names used by cmd_pipeline for the four dataset variants.
inline constexpr const char* kOriginalDir = "original";
inline constexpr const char* kOriginalFlippedDir = "original_flipped";
inline constexpr const char* kAugmentedDir = "augmented";
inline constexpr const char* kAugmentedFlippedDir = "augmented_flipped";

// Published QQP counts (GLUE train/dev). Deviation checks compare a run's
// numbers against these; they are never asserted by the pipeline itself.
struct ReferenceCount {
  std::string metric;
  std::size_t expected = 0;
};
std::vector<ReferenceCount> qqp_reference_counts();

struct Deviation {
  std::string metric;
  std::size_t expected = 0;
  std::optional<std::size_t> actual;  // absent when the split was not supplied
};

}  // namespace paragraph

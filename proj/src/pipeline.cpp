#include "paragraph/pipeline.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <future>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "paragraph/signed_graph.hpp"

namespace paragraph {

namespace fs = std::filesystem;

namespace {

enum class LogLevel { Quiet, Warn, Info, Debug };

// Verbosity comes from PARAGRAPH_LOG (quiet|warn|info|debug), default info.
LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("PARAGRAPH_LOG");
    const std::string value = env ? env : "";
    if (value == "quiet") return LogLevel::Quiet;
    if (value == "warn") return LogLevel::Warn;
    if (value == "debug") return LogLevel::Debug;
    return LogLevel::Info;
  }();
  return level;
}

class Log {
 public:
  explicit Log(std::ostream& err) : err_(err) {}
  void error(const std::string& msg) const { err_ << "error: " << msg << '\n'; }
  void warn(const std::string& msg) const {
    if (log_level() >= LogLevel::Warn) err_ << "warning: " << msg << '\n';
  }
  void info(const std::string& msg) const {
    if (log_level() >= LogLevel::Info) err_ << msg << '\n';
  }

 private:
  std::ostream& err_;
};

// Raised inside a command to unwind with a specific exit code.
struct CommandFailure {
  int code;
  std::string message;
};

struct SplitInput {
  Split split;
  fs::path path;
};

std::vector<SplitInput> inputs_of(const PipelineConfig& config) {
  std::vector<SplitInput> inputs;
  if (config.train_input) inputs.push_back({Split::Train, *config.train_input});
  if (config.test_input) inputs.push_back({Split::Test, *config.test_input});
  return inputs;
}

std::string ext(const PipelineConfig& config) { return std::string(report_extension(config.report_format)); }

std::string split_file(Split split, std::string_view suffix) {
  return std::string(to_string(split)) + std::string(suffix);
}

// Files a command writes directly under `dir` for the given splits.
std::vector<fs::path> variant_files(const fs::path& dir, const PipelineConfig& config,
                                    const std::vector<SplitInput>& inputs) {
  std::vector<fs::path> files{dir / ("stats." + ext(config))};
  for (const SplitInput& in : inputs) {
    for (std::string_view suffix : {".tsv", ".parse.", ".conflicts.", ".flips.", ".augmentation.", ".edges.tsv"}) {
      std::string name = split_file(in.split, suffix);
      if (name.back() == '.') name += ext(config);
      files.push_back(dir / name);
    }
  }
  return files;
}

void validate_inputs(const PipelineConfig& config, bool needs_out_dir, const std::vector<fs::path>& outputs) {
  const auto inputs = inputs_of(config);
  if (inputs.empty()) throw CommandFailure{kExitUsage, "no input given (use --input-train and/or --input-test)"};
  for (const SplitInput& in : inputs) {
    std::error_code ec;
    if (!fs::is_regular_file(in.path, ec)) {
      throw CommandFailure{kExitIoFailure, "input does not exist or is not a file: " + in.path.string()};
    }
  }
  if (inputs.size() == 2 && fs::equivalent(inputs[0].path, inputs[1].path)) {
    throw CommandFailure{kExitUsage, "train and test inputs are the same file"};
  }
  if (needs_out_dir && config.out_dir.empty()) throw CommandFailure{kExitUsage, "--out-dir is required"};
  for (const fs::path& out : outputs) {
    for (const SplitInput& in : inputs) {
      if (fs::weakly_canonical(out) == fs::weakly_canonical(in.path)) {
        throw CommandFailure{kExitUsage, "output would overwrite input: " + in.path.string()};
      }
    }
  }
}

ParseResult load_split(const SplitInput& in, const PipelineConfig& config, const Log& log) {
  std::ifstream file(in.path, std::ios::binary);
  if (!file) throw CommandFailure{kExitIoFailure, "cannot open " + in.path.string()};
  ParseResult parsed;
  try {
    parsed = parse_dataset(file, config.format, in.split);
  } catch (const FormatError& e) {
    throw CommandFailure{kExitParseFailure, in.path.string() + ": " + e.what()};
  } catch (const IoError& e) {
    throw CommandFailure{kExitIoFailure, in.path.string() + ": " + e.what()};
  }
  const ParseReport& report = parsed.report;
  for (const RowError& e : report.errors) {
    if (log_level() >= LogLevel::Debug) log.warn(in.path.string() + ":" + std::to_string(e.line) + ": " + e.message);
  }
  if (!report.errors.empty()) {
    log.warn(in.path.string() + ": skipped " + std::to_string(report.errors.size()) + " malformed row(s)");
    if (config.strict) {
      const RowError& first = report.errors.front();
      throw CommandFailure{kExitParseFailure,
                           in.path.string() + ":" + std::to_string(first.line) + ": " + first.message};
    }
  }
  if (report.records > 0 && report.accepted_rows == 0 && report.errors.size() == report.records) {
    throw CommandFailure{kExitParseFailure, in.path.string() + ": no usable rows"};
  }
  if (report.records == 0) log.warn(in.path.string() + ": no data rows");
  if (!report.raw_conflicts.empty()) {
    log.warn(in.path.string() + ": excluded " + std::to_string(report.raw_conflicts.size()) +
             " pair(s) labeled both ways");
  }
  log.info(std::string(to_string(in.split)) + ": " + std::to_string(parsed.dataset.pairs.size()) + " pairs over " +
           std::to_string(parsed.dataset.sentences.size()) + " sentences");
  return parsed;
}

template <typename Writer>
void write_file(const fs::path& path, Writer&& writer) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw CommandFailure{kExitIoFailure, "cannot write " + path.string()};
  try {
    writer(file);
  } catch (const IoError& e) {
    throw CommandFailure{kExitIoFailure, path.string() + ": " + e.what()};
  }
  file.close();
  if (!file) throw CommandFailure{kExitIoFailure, "write failed: " + path.string()};
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw CommandFailure{kExitIoFailure, "cannot create " + dir.string() + ": " + ec.message()};
}

// Everything derived from one parsed split.
struct SplitState {
  Split split = Split::Train;
  ParseResult parsed;
  ConflictReport conflicts;
  std::optional<FlipResult> flipped;             // original, flipped
  std::optional<AugmentationResult> augmented;   // augmented, unflipped
  std::optional<AugmentationResult> augmented_flipped;
  FlipLog augmented_flip_log;  // flips applied for augmented_flipped
  ParaphraseGraph graph;
};

struct Stages {
  bool flip = false;
  bool augment = false;
  bool augment_flipped = false;
};

SplitState process_split(ParseResult parsed, const PipelineConfig& config, Stages stages) {
  SplitState state;
  state.split = parsed.dataset.split;
  state.parsed = std::move(parsed);
  const LabeledDataset& original = state.parsed.dataset;
  state.graph = build_graph(original);
  const ClusterIndex index = positive_components(state.graph);
  state.conflicts = detect_conflicts(state.graph, index, state.split);

  if (stages.flip || (stages.augment_flipped && config.flip_before_infer)) {
    state.flipped = flip_conflicts(original, state.conflicts);
  }
  if (stages.augment || (stages.augment_flipped && !config.flip_before_infer)) {
    state.augmented = augment_dataset(original, config.policy);
  }
  if (stages.augment_flipped) {
    if (config.flip_before_infer) {
      state.augmented_flipped = augment_dataset(state.flipped->dataset, config.policy);
      state.augmented_flip_log = state.flipped->log;
    } else {
      FlipResult post = flip_conflicts(state.augmented->dataset, state.conflicts);
      AugmentationResult result = *state.augmented;
      result.dataset = std::move(post.dataset);
      result.report.output_stats = compute_stats(result.dataset);
      state.augmented_flipped = std::move(result);
      state.augmented_flip_log = std::move(post.log);
    }
  }
  return state;
}

std::vector<SplitState> run_splits(const PipelineConfig& config, const Log& log, Stages stages) {
  std::vector<ParseResult> parsed;
  const auto inputs = inputs_of(config);
  for (const SplitInput& in : inputs) parsed.push_back(load_split(in, config, log));

  // Splits are independent; each worker only reads its own parsed value.
  std::vector<std::future<SplitState>> workers;
  for (ParseResult& p : parsed) {
    workers.push_back(std::async(std::launch::async, [&config, stages, p = std::move(p)]() mutable {
      return process_split(std::move(p), config, stages);
    }));
  }
  std::vector<SplitState> states;
  for (auto& w : workers) states.push_back(w.get());
  for (const SplitState& s : states) {
    if (!s.conflicts.empty()) {
      log.info(std::string(to_string(s.split)) + ": " + std::to_string(s.conflicts.conflicts.size()) +
               " conflicted pair(s)");
    }
  }
  return states;
}

enum class Variant { Original, OriginalFlipped, Augmented, AugmentedFlipped };

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::Original:
      return kOriginalDir;
    case Variant::OriginalFlipped:
      return kOriginalFlippedDir;
    case Variant::Augmented:
      return kAugmentedDir;
    case Variant::AugmentedFlipped:
      return kAugmentedFlippedDir;
  }
  return "";
}

const LabeledDataset& variant_dataset(const SplitState& s, Variant v) {
  switch (v) {
    case Variant::Original:
      return s.parsed.dataset;
    case Variant::OriginalFlipped:
      return s.flipped->dataset;
    case Variant::Augmented:
      return s.augmented->dataset;
    case Variant::AugmentedFlipped:
      return s.augmented_flipped->dataset;
  }
  return s.parsed.dataset;
}

StatsRow stats_row(const std::vector<SplitState>& states, Variant v) {
  StatsRow row;
  row.variant = variant_name(v);
  for (const SplitState& s : states) {
    (s.split == Split::Train ? row.train : row.test) = compute_stats(variant_dataset(s, v));
  }
  return row;
}

// The file set of one dataset variant; identical whether written by a single
// command or as one directory of the full pipeline.
void write_variant(const fs::path& dir, const std::vector<SplitState>& states, Variant v,
                   const PipelineConfig& config) {
  ensure_dir(dir);
  const ReportFormat fmt = config.report_format;
  for (const SplitState& s : states) {
    const LabeledDataset& data = variant_dataset(s, v);
    write_file(dir / split_file(s.split, ".tsv"), [&](std::ostream& o) { write_dataset(data, o, config.format); });
    write_file(dir / (split_file(s.split, ".parse.") + ext(config)),
               [&](std::ostream& o) { write_parse_report(s.parsed.report, s.split, o, fmt); });
    write_file(dir / (split_file(s.split, ".conflicts.") + ext(config)),
               [&](std::ostream& o) { write_conflict_report(s.conflicts, s.parsed.dataset, o, fmt); });
    if (v == Variant::OriginalFlipped) {
      write_file(dir / (split_file(s.split, ".flips.") + ext(config)),
                 [&](std::ostream& o) { write_flip_log(s.flipped->log, s.parsed.dataset, s.split, o, fmt); });
    }
    if (v == Variant::Augmented || v == Variant::AugmentedFlipped) {
      const AugmentationResult& aug = v == Variant::Augmented ? *s.augmented : *s.augmented_flipped;
      write_file(dir / (split_file(s.split, ".augmentation.") + ext(config)),
                 [&](std::ostream& o) { write_augmentation_report(aug.report, s.split, o, fmt); });
    }
    if (v == Variant::AugmentedFlipped) {
      write_file(dir / (split_file(s.split, ".flips.") + ext(config)),
                 [&](std::ostream& o) { write_flip_log(s.augmented_flip_log, s.parsed.dataset, s.split, o, fmt); });
    }
    if (config.export_graph) {
      const ParaphraseGraph graph = build_graph(data);
      write_file(dir / split_file(s.split, ".edges.tsv"), [&](std::ostream& o) { write_edge_list(graph, o); });
    }
  }
  const StatsRow row = stats_row(states, v);
  write_file(dir / ("stats." + ext(config)), [&](std::ostream& o) { write_stats_table({&row, 1}, o, fmt); });
}

std::vector<Deviation> compare_with_reference(const std::vector<SplitState>& states) {
  std::map<std::string, std::size_t> actual;
  std::size_t inferred_pos = 0;
  std::size_t inferred_neg = 0;
  bool have_all_splits = states.size() == 2;
  for (const SplitState& s : states) {
    const std::string split(to_string(s.split));
    for (Variant v : {Variant::Original, Variant::OriginalFlipped, Variant::Augmented, Variant::AugmentedFlipped}) {
      const DatasetStats stats = compute_stats(variant_dataset(s, v));
      const std::string prefix = std::string(variant_name(v)) + "/" + split + "/";
      actual[prefix + "paraphrase"] = stats.n_positive;
      actual[prefix + "non_paraphrase"] = stats.n_negative;
    }
    actual["conflicts/" + split] = s.conflicts.conflicts.size();
    inferred_pos += s.augmented->report.inferred_positive;
    inferred_neg += s.augmented->report.inferred_negative;
  }
  if (have_all_splits) {
    actual["augmented/all/inferred_positive"] = inferred_pos;
    actual["augmented/all/inferred_negative"] = inferred_neg;
  }
  std::vector<Deviation> result;
  for (const ReferenceCount& ref : qqp_reference_counts()) {
    Deviation d{ref.metric, ref.expected, std::nullopt};
    if (auto it = actual.find(ref.metric); it != actual.end()) d.actual = it->second;
    result.push_back(std::move(d));
  }
  return result;
}

void write_deviations(const std::vector<Deviation>& deviations, std::ostream& out, ReportFormat format) {
  if (format == ReportFormat::Structured) {
    nlohmann::json j = nlohmann::json::array();
    for (const Deviation& d : deviations) {
      nlohmann::json entry{{"metric", d.metric}, {"expected", d.expected}};
      entry["actual"] = d.actual ? nlohmann::json(*d.actual) : nlohmann::json(nullptr);
      entry["delta"] = d.actual ? nlohmann::json(static_cast<long long>(*d.actual) - static_cast<long long>(d.expected))
                                : nlohmann::json(nullptr);
      j.push_back(std::move(entry));
    }
    out << j.dump(2) << '\n';
    return;
  }
  std::size_t mismatches = 0;
  for (const Deviation& d : deviations) {
    out << d.metric << '\t' << d.expected << '\t';
    if (!d.actual) {
      out << "n/a\tnot evaluated\n";
      continue;
    }
    const long long delta = static_cast<long long>(*d.actual) - static_cast<long long>(d.expected);
    out << *d.actual << '\t' << (delta == 0 ? "match" : "delta " + std::to_string(delta)) << '\n';
    if (delta != 0) ++mismatches;
  }
  out << "deviations: " << mismatches << '\n';
}

template <typename Body>
int run_command(const PipelineConfig& config, Console console, Body&& body) {
  const Log log(console.err);
  (void)config;
  try {
    return body(log);
  } catch (const CommandFailure& f) {
    log.error(f.message);
    return f.code;
  } catch (const DatasetError& e) {
    log.error(e.what());
    return kExitParseFailure;
  } catch (const IoError& e) {
    log.error(e.what());
    return kExitIoFailure;
  } catch (const fs::filesystem_error& e) {
    log.error(e.what());
    return kExitIoFailure;
  }
}

}  // namespace

std::vector<ReferenceCount> qqp_reference_counts() {
  return {
      {"original/train/paraphrase", 134378},
      {"original/train/non_paraphrase", 229468},
      {"original/test/paraphrase", 14885},
      {"original/test/non_paraphrase", 25545},
      {"original_flipped/train/paraphrase", 134446},
      {"original_flipped/train/non_paraphrase", 229380},
      {"original_flipped/test/paraphrase", 14886},
      {"original_flipped/test/non_paraphrase", 25544},
      {"augmented/train/paraphrase", 220890},
      {"augmented/train/non_paraphrase", 363986},
      {"augmented/test/paraphrase", 42570},
      {"augmented/test/non_paraphrase", 28164},
      {"augmented_flipped/train/paraphrase", 220978},
      {"augmented_flipped/train/non_paraphrase", 363898},
      {"augmented_flipped/test/paraphrase", 42572},
      {"augmented_flipped/test/non_paraphrase", 28162},
      {"conflicts/train", 88},
      {"conflicts/test", 2},
      {"augmented/all/inferred_positive", 114197},
      {"augmented/all/inferred_negative", 137137},
  };
}

int cmd_stats(const PipelineConfig& config, Console console) {
  return run_command(config, console, [&](const Log& log) {
    std::vector<fs::path> outputs;
    if (!config.out_dir.empty()) outputs.push_back(config.out_dir / ("stats." + ext(config)));
    validate_inputs(config, false, outputs);
    StatsRow row;
    row.variant = kOriginalDir;
    for (const SplitInput& in : inputs_of(config)) {
      const ParseResult parsed = load_split(in, config, log);
      (in.split == Split::Train ? row.train : row.test) = compute_stats(parsed.dataset);
    }
    write_stats_table({&row, 1}, console.out, config.report_format);
    if (!config.out_dir.empty()) {
      ensure_dir(config.out_dir);
      write_file(outputs.front(), [&](std::ostream& o) { write_stats_table({&row, 1}, o, config.report_format); });
    }
    return int{kExitOk};
  });
}

int cmd_check(const PipelineConfig& config, Console console) {
  return run_command(config, console, [&](const Log& log) {
    std::vector<fs::path> outputs;
    if (!config.out_dir.empty()) {
      for (const SplitInput& in : inputs_of(config)) {
        outputs.push_back(config.out_dir / (split_file(in.split, ".conflicts.") + ext(config)));
      }
    }
    validate_inputs(config, false, outputs);
    const std::vector<SplitState> states = run_splits(config, log, {});
    bool found = false;
    for (const SplitState& s : states) {
      found = found || !s.conflicts.empty();
      if (config.out_dir.empty()) {
        write_conflict_report(s.conflicts, s.parsed.dataset, console.out, config.report_format);
      } else {
        ensure_dir(config.out_dir);
        write_file(config.out_dir / (split_file(s.split, ".conflicts.") + ext(config)), [&](std::ostream& o) {
          write_conflict_report(s.conflicts, s.parsed.dataset, o, config.report_format);
        });
        console.out << to_string(s.split) << ": " << s.conflicts.conflicts.size() << " conflict(s)\n";
      }
    }
    return int{found ? kExitConflictsFound : kExitOk};
  });
}

int cmd_flip(const PipelineConfig& config, Console console) {
  return run_command(config, console, [&](const Log& log) {
    validate_inputs(config, true, variant_files(config.out_dir, config, inputs_of(config)));
    const std::vector<SplitState> states = run_splits(config, log, {.flip = true});
    write_variant(config.out_dir, states, Variant::OriginalFlipped, config);
    for (const SplitState& s : states) {
      console.out << to_string(s.split) << ": flipped " << s.flipped->log.flipped.size() << " pair(s)\n";
    }
    return int{kExitOk};
  });
}

int cmd_augment(const PipelineConfig& config, Console console) {
  return run_command(config, console, [&](const Log& log) {
    validate_inputs(config, true, variant_files(config.out_dir, config, inputs_of(config)));
    const Stages stages = config.flip ? Stages{.augment_flipped = true} : Stages{.augment = true};
    const std::vector<SplitState> states = run_splits(config, log, stages);
    const Variant v = config.flip ? Variant::AugmentedFlipped : Variant::Augmented;
    write_variant(config.out_dir, states, v, config);
    const StatsRow row = stats_row(states, v);
    write_stats_table({&row, 1}, console.out, config.report_format);
    return int{kExitOk};
  });
}

int cmd_pipeline(const PipelineConfig& config, Console console) {
  return run_command(config, console, [&](const Log& log) {
    const auto inputs = inputs_of(config);
    std::vector<fs::path> outputs{config.out_dir / ("stats." + ext(config)),
                                  config.out_dir / ("deviations." + ext(config))};
    for (const char* dir : {kOriginalDir, kOriginalFlippedDir, kAugmentedDir, kAugmentedFlippedDir}) {
      for (fs::path& f : variant_files(config.out_dir / dir, config, inputs)) outputs.push_back(std::move(f));
    }
    validate_inputs(config, true, outputs);

    const std::vector<SplitState> states =
        run_splits(config, log, {.flip = true, .augment = true, .augment_flipped = true});
    std::vector<StatsRow> rows;
    for (Variant v : {Variant::Original, Variant::OriginalFlipped, Variant::Augmented, Variant::AugmentedFlipped}) {
      write_variant(config.out_dir / variant_name(v), states, v, config);
      rows.push_back(stats_row(states, v));
    }
    write_file(config.out_dir / ("stats." + ext(config)),
               [&](std::ostream& o) { write_stats_table(rows, o, config.report_format); });
    write_stats_table(rows, console.out, config.report_format);

    if (config.compare_reference) {
      const std::vector<Deviation> deviations = compare_with_reference(states);
      write_file(config.out_dir / ("deviations." + ext(config)),
                 [&](std::ostream& o) { write_deviations(deviations, o, config.report_format); });
      const auto mismatched = std::count_if(deviations.begin(), deviations.end(), [](const Deviation& d) {
        return d.actual && *d.actual != d.expected;
      });
      if (mismatched > 0) log.warn(std::to_string(mismatched) + " count(s) differ from the QQP reference; see deviations file");
    }
    return int{kExitOk};
  });
}

}  // namespace paragraph

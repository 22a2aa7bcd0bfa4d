#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "paragraph/pipeline.hpp"

namespace {

struct Options {
  std::string train;
  std::string test;
  std::string out_dir;
  std::string format = "qqp";
  std::string delimiter;
  bool no_header = false;
  bool flip = true;
  bool flip_before_infer = true;
  std::string conflict_policy = "drop";
  long long max_cluster_pairs = -1;
  std::string report_format = "text";
  bool strict = false;
  bool compare_reference = false;
  bool export_graph = false;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--input-train", o.train, "Training split table")->check(CLI::ExistingFile);
  cmd->add_option("--input-test", o.test, "Testing split table")->check(CLI::ExistingFile);
  cmd->add_option("--out-dir", o.out_dir, "Output directory");
  cmd->add_option("--format", o.format, "Column layout")->check(CLI::IsMember({"qqp", "generic"}));
  cmd->add_option("--delimiter", o.delimiter, "Field delimiter (default: tab; \\t and 'tab' accepted)");
  cmd->add_flag("--no-header", o.no_header, "Input has no header row; columns are positional");
  cmd->add_option("--report-format", o.report_format, "Report format")->check(CLI::IsMember({"text", "structured"}));
  cmd->add_flag("--strict", o.strict, "Fail on any malformed row instead of skipping it");
}

void add_inference(CLI::App* cmd, Options& o) {
  cmd->add_option("--conflict-policy", o.conflict_policy, "Pairs inferred both ways")
      ->check(CLI::IsMember({"drop", "prefer-positive", "prefer-negative"}));
  cmd->add_option("--max-cluster-pairs", o.max_cluster_pairs, "Cap on inferred positives per cluster")
      ->check(CLI::NonNegativeNumber);
}

paragraph::PipelineConfig to_config(const Options& o) {
  paragraph::PipelineConfig config;
  if (!o.train.empty()) config.train_input = o.train;
  if (!o.test.empty()) config.test_input = o.test;
  config.out_dir = o.out_dir;
  config.format = o.format == "generic" ? paragraph::FormatConfig::generic() : paragraph::FormatConfig::qqp();
  if (!o.delimiter.empty()) {
    if (o.delimiter == "\\t" || o.delimiter == "tab") {
      config.format.delimiter = '\t';
    } else if (o.delimiter.size() == 1) {
      config.format.delimiter = o.delimiter[0];
    } else {
      throw CLI::ValidationError("--delimiter", "must be a single character");
    }
  }
  config.format.has_header = !o.no_header;
  config.flip = o.flip;
  config.flip_before_infer = o.flip_before_infer;
  config.policy.conflicted_pair_handling = *paragraph::parse_conflict_handling(o.conflict_policy);
  if (o.max_cluster_pairs >= 0) config.policy.max_cluster_pairs = static_cast<std::size_t>(o.max_cluster_pairs);
  config.report_format = *paragraph::parse_report_format(o.report_format);
  config.strict = o.strict;
  config.compare_reference = o.compare_reference;
  config.export_graph = o.export_graph;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Signed-graph augmentation and label repair for sentence-pair datasets"};
  app.require_subcommand(1);
  Options o;

  auto* stats = app.add_subcommand("stats", "Paraphrase / non-paraphrase counts per split");
  add_common(stats, o);

  auto* check = app.add_subcommand("check", "Report negative pairs inside paraphrase clusters");
  add_common(check, o);

  auto* flip = app.add_subcommand("flip", "Relabel conflicted pairs as paraphrases");
  add_common(flip, o);

  auto* augment = app.add_subcommand("augment", "Add pairs inferred by transitivity");
  add_common(augment, o);
  add_inference(augment, o);
  augment->add_flag("--flip,!--no-flip", o.flip, "Repair conflicts as part of augmentation (default on)");
  augment->add_flag("--flip-before-infer,!--infer-before-flip", o.flip_before_infer,
                    "Order of repair and inference (default: flip first)");

  auto* pipeline = app.add_subcommand("pipeline", "Write all four dataset variants and their reports");
  add_common(pipeline, o);
  add_inference(pipeline, o);
  pipeline->add_flag("--flip-before-infer,!--infer-before-flip", o.flip_before_infer,
                     "Order of repair and inference for the flipped augmented variant");
  pipeline->add_flag("--compare-qqp-reference", o.compare_reference,
                     "Itemize differences from the published QQP counts");

  for (auto* cmd : {flip, augment, pipeline}) {
    cmd->add_flag("--export-graph", o.export_graph, "Also write each split's signed edge list");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : paragraph::kExitUsage;
  }

  paragraph::PipelineConfig config;
  try {
    config = to_config(o);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return paragraph::kExitUsage;
  }

  const paragraph::Console console{std::cout, std::cerr};
  if (stats->parsed()) return paragraph::cmd_stats(config, console);
  if (check->parsed()) return paragraph::cmd_check(config, console);
  if (flip->parsed()) return paragraph::cmd_flip(config, console);
  if (augment->parsed()) return paragraph::cmd_augment(config, console);
  return paragraph::cmd_pipeline(config, console);
}

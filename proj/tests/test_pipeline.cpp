#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "json.hpp"
#include "paragraph/pipeline.hpp"

using namespace paragraph;
using fixtures::read_text;
using fixtures::TempDir;
using fixtures::write_text;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

template <typename Command>
Run run(Command command, const PipelineConfig& config) {
  std::ostringstream out;
  std::ostringstream err;
  Run r;
  r.code = command(config, Console{out, err});
  r.out = out.str();
  r.err = err.str();
  return r;
}

const std::string kTriangle = fixtures::qqp_rows({{"A?", "B?", 1}, {"B?", "C?", 1}, {"A?", "C?", 0}});
const std::string kFragment = fixtures::qqp_rows({{"A?", "D?", 1}, {"D?", "F?", 1}, {"C?", "D?", 0}});

ParseResult parse_file(const std::filesystem::path& path) {
  std::istringstream in(read_text(path));
  return parse_dataset(in, FormatConfig::qqp());
}

}  // namespace

TEST_CASE("cmd_stats") {
  TempDir dir("stats");
  write_text(dir / "train.tsv", kTriangle);
  write_text(dir / "empty.tsv", "");
  write_text(dir / "bad.tsv", fixtures::qqp_header() + "0\t1\t2\tA\tB\tmaybe\n1\t1\t2\tA\n");

  PipelineConfig config;
  config.train_input = dir / "train.tsv";
  Run r = run(cmd_stats, config);
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("66.67") != std::string::npos);

  config.train_input = dir / "empty.tsv";
  r = run(cmd_stats, config);
  CHECK(r.code == kExitOk);
  CHECK(r.err.find("warning") != std::string::npos);

  config.train_input = dir / "bad.tsv";
  r = run(cmd_stats, config);
  CHECK(r.code == kExitParseFailure);

  write_text(dir / "wrong_header.tsv", "a\tb\tc\nx\ty\t1\n");
  config.train_input = dir / "wrong_header.tsv";
  CHECK(run(cmd_stats, config).code == kExitParseFailure);

  config.train_input = dir / "missing.tsv";
  CHECK(run(cmd_stats, config).code == kExitIoFailure);

  config.train_input.reset();
  CHECK(run(cmd_stats, config).code == kExitUsage);
}

TEST_CASE("strict mode fails on any malformed row") {
  TempDir dir("strict");
  write_text(dir / "train.tsv", kTriangle + "9\t\t\tX\tY\t5\n");
  PipelineConfig config;
  config.train_input = dir / "train.tsv";
  CHECK(run(cmd_stats, config).code == kExitOk);
  config.strict = true;
  CHECK(run(cmd_stats, config).code == kExitParseFailure);
}

TEST_CASE("cmd_check") {
  TempDir dir("check");
  write_text(dir / "clean.tsv", kFragment);
  write_text(dir / "triangle.tsv", kTriangle);

  PipelineConfig config;
  config.train_input = dir / "clean.tsv";
  Run r = run(cmd_check, config);
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("conflicts: 0") != std::string::npos);

  config.train_input = dir / "triangle.tsv";
  config.out_dir = dir / "out";
  config.report_format = ReportFormat::Structured;
  r = run(cmd_check, config);
  CHECK(r.code == kExitConflictsFound);
  const auto report = nlohmann::json::parse(read_text(dir / "out" / "train.conflicts.json"));
  REQUIRE(report["conflicts"].size() == 1);
  CHECK(report["conflicts"][0]["text_a"] == "A?");
  CHECK(report["conflicts"][0]["text_b"] == "C?");
  CHECK(report["conflicts"][0]["witness"] == nlohmann::json::array({"A?", "B?", "C?"}));
}

TEST_CASE("cmd_flip") {
  TempDir dir("flip");
  write_text(dir / "triangle.tsv", kTriangle);
  PipelineConfig config;
  config.train_input = dir / "triangle.tsv";
  config.out_dir = dir / "out";
  REQUIRE(run(cmd_flip, config).code == kExitOk);
  const ParseResult flipped = parse_file(dir / "out" / "train.tsv");
  REQUIRE(flipped.dataset.pairs.size() == 3);
  for (const LabeledPair& p : flipped.dataset.pairs) CHECK(p.label == Label::Positive);
  CHECK(compute_stats(flipped.dataset).n_by_provenance.at(Provenance::Flipped) == 1);
  CHECK(read_text(dir / "out" / "train.flips.txt").find("flipped: 1") != std::string::npos);

  // Conflict-free input: output is the plain rewrite of the parsed input.
  write_text(dir / "clean.tsv", kFragment);
  config.train_input = dir / "clean.tsv";
  config.out_dir = dir / "clean_out";
  REQUIRE(run(cmd_flip, config).code == kExitOk);
  std::istringstream in(kFragment);
  std::ostringstream rewrite;
  write_dataset(parse_dataset(in, FormatConfig::qqp()).dataset, rewrite, FormatConfig::qqp());
  CHECK(read_text(dir / "clean_out" / "train.tsv") == rewrite.str());
  CHECK(read_text(dir / "clean_out" / "train.flips.txt").find("flipped: 0") != std::string::npos);
}

TEST_CASE("cmd_augment") {
  TempDir dir("augment");
  write_text(dir / "fragment.tsv", kFragment);
  PipelineConfig config;
  config.train_input = dir / "fragment.tsv";
  config.out_dir = dir / "out";
  REQUIRE(run(cmd_augment, config).code == kExitOk);
  const ParseResult out = parse_file(dir / "out" / "train.tsv");
  CHECK(out.dataset.pairs.size() == 6);
  const DatasetStats s = compute_stats(out.dataset);
  CHECK(s.n_positive == 3);
  CHECK(s.n_negative == 3);
  CHECK(s.n_by_provenance.at(Provenance::InferredPositive) == 1);
  CHECK(s.n_by_provenance.at(Provenance::InferredNegative) == 2);
}

TEST_CASE("flip order does not change the repaired augmented dataset") {
  TempDir dir("order");
  write_text(dir / "train.tsv", fixtures::synthetic_qqp(5, 400, 120, 6));
  PipelineConfig config;
  config.train_input = dir / "train.tsv";
  config.out_dir = dir / "flip_first";
  REQUIRE(run(cmd_augment, config).code == kExitOk);
  config.out_dir = dir / "infer_first";
  config.flip_before_infer = false;
  REQUIRE(run(cmd_augment, config).code == kExitOk);
  CHECK(read_text(dir / "flip_first" / "train.tsv") == read_text(dir / "infer_first" / "train.tsv"));
}

TEST_CASE("cmd_pipeline writes four variants and composes the single commands") {
  TempDir dir("pipeline");
  write_text(dir / "train.tsv", fixtures::synthetic_qqp(1, 600, 150, 7));
  write_text(dir / "test.tsv", fixtures::synthetic_qqp(2, 200, 80, 5));

  PipelineConfig config;
  config.train_input = dir / "train.tsv";
  config.test_input = dir / "test.tsv";
  config.out_dir = dir / "all";
  REQUIRE(run(cmd_pipeline, config).code == kExitOk);
  for (const char* variant : {kOriginalDir, kOriginalFlippedDir, kAugmentedDir, kAugmentedFlippedDir}) {
    CHECK(std::filesystem::exists(dir / "all" / variant / "train.tsv"));
    CHECK(std::filesystem::exists(dir / "all" / variant / "test.tsv"));
  }

  config.out_dir = dir / "flip";
  REQUIRE(run(cmd_flip, config).code == kExitOk);
  CHECK(fixtures::snapshot(dir / "flip") == fixtures::snapshot(dir / "all" / kOriginalFlippedDir));

  config.out_dir = dir / "aug";
  config.flip = false;
  REQUIRE(run(cmd_augment, config).code == kExitOk);
  CHECK(fixtures::snapshot(dir / "aug") == fixtures::snapshot(dir / "all" / kAugmentedDir));

  config.out_dir = dir / "aug_flipped";
  config.flip = true;
  REQUIRE(run(cmd_augment, config).code == kExitOk);
  CHECK(fixtures::snapshot(dir / "aug_flipped") == fixtures::snapshot(dir / "all" / kAugmentedFlippedDir));

  // The synthetic noise should have produced something to repair.
  const ParseResult original = parse_file(dir / "all" / kOriginalDir / "train.tsv");
  const ParseResult repaired = parse_file(dir / "all" / kOriginalFlippedDir / "train.tsv");
  CHECK(compute_stats(repaired.dataset).n_positive > compute_stats(original.dataset).n_positive);
}

TEST_CASE("cmd_pipeline on a conflict-free corpus leaves the flipped variant unchanged") {
  TempDir dir("clean");
  write_text(dir / "train.tsv", kFragment);
  PipelineConfig config;
  config.train_input = dir / "train.tsv";
  config.out_dir = dir / "out";
  REQUIRE(run(cmd_pipeline, config).code == kExitOk);
  CHECK(read_text(dir / "out" / kOriginalDir / "train.tsv") ==
        read_text(dir / "out" / kOriginalFlippedDir / "train.tsv"));
  CHECK(read_text(dir / "out" / kAugmentedDir / "train.tsv") ==
        read_text(dir / "out" / kAugmentedFlippedDir / "train.tsv"));
}

TEST_CASE("cmd_pipeline reference comparison itemizes every count") {
  TempDir dir("reference");
  write_text(dir / "train.tsv", kFragment);
  write_text(dir / "test.tsv", kTriangle);
  PipelineConfig config;
  config.train_input = dir / "train.tsv";
  config.test_input = dir / "test.tsv";
  config.out_dir = dir / "out";
  config.compare_reference = true;
  config.report_format = ReportFormat::Structured;
  const Run r = run(cmd_pipeline, config);
  REQUIRE(r.code == kExitOk);
  CHECK(r.err.find("differ from the QQP reference") != std::string::npos);
  const auto deviations = nlohmann::json::parse(read_text(dir / "out" / "deviations.json"));
  CHECK(deviations.size() == qqp_reference_counts().size());
  for (const auto& d : deviations) {
    if (d["metric"] == "conflicts/test") {
      CHECK(d["actual"] == 1);
      CHECK(d["delta"] == -1);
    }
    if (d["metric"] == "augmented/all/inferred_positive") CHECK(d["actual"] == 1);
  }
}

TEST_CASE("outputs may not overwrite inputs") {
  TempDir dir("clobber");
  write_text(dir / "train.tsv", kTriangle);
  PipelineConfig config;
  config.train_input = dir / "train.tsv";
  config.out_dir = dir.path();
  CHECK(run(cmd_flip, config).code == kExitUsage);
  CHECK(read_text(dir / "train.tsv") == kTriangle);

  config.out_dir.clear();
  CHECK(run(cmd_flip, config).code == kExitUsage);

  config.out_dir = dir / "out";
  config.test_input = dir / "train.tsv";
  CHECK(run(cmd_flip, config).code == kExitUsage);
}

TEST_CASE("structured reports are valid JSON") {
  TempDir dir("json");
  write_text(dir / "train.tsv", kTriangle);
  PipelineConfig config;
  config.train_input = dir / "train.tsv";
  config.out_dir = dir / "out";
  config.report_format = ReportFormat::Structured;
  config.export_graph = true;
  REQUIRE(run(cmd_pipeline, config).code == kExitOk);
  for (const auto& [name, text] : fixtures::snapshot(dir / "out")) {
    if (!name.ends_with(".json")) continue;
    CAPTURE(name);
    CHECK(nlohmann::json::accept(text));
  }
  const auto aug = nlohmann::json::parse(read_text(dir / "out" / kAugmentedDir / "train.augmentation.json"));
  CHECK(aug["conflict_handling"] == "drop");
  CHECK(read_text(dir / "out" / kOriginalDir / "train.edges.tsv") == "0\t1\t+\n0\t2\t-\n1\t2\t+\n");
}

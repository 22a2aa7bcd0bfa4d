#include <algorithm>
#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "paragraph/balance_checker.hpp"

using namespace paragraph;

namespace {

constexpr Label P = Label::Positive;
constexpr Label N = Label::Negative;

LabeledDataset triangle(Label ab, Label bc, Label ac) {
  LabeledDataset d;
  d.sentences = {{0, "A", {}}, {1, "B", {}}, {2, "C", {}}};
  d.pairs = {make_pair(0, 1, ab), make_pair(0, 2, ac), make_pair(1, 2, bc)};
  return d;
}

ConflictReport check(const LabeledDataset& d) {
  const auto g = build_graph(d);
  return detect_conflicts(g, positive_components(g), d.split);
}

}  // namespace

TEST_CASE("classify_triad") {
  CHECK(classify_triad({P, P, P}) == BalanceClass::Balanced);
  CHECK(classify_triad({P, N, N}) == BalanceClass::Balanced);
  CHECK(classify_triad({N, N, N}) == BalanceClass::WeaklyBalanced);
  CHECK(classify_triad({P, P, N}) == BalanceClass::Imbalanced);
}

TEST_CASE("classify_triad depends only on the sign multiset") {
  for (int mask = 0; mask < 8; ++mask) {
    std::array<Label, 3> signs{};
    for (int i = 0; i < 3; ++i) signs[i] = (mask >> i) & 1 ? P : N;
    const BalanceClass expected = classify_triad(signs);
    std::sort(signs.begin(), signs.end());
    do {
      CHECK(classify_triad(signs) == expected);
    } while (std::next_permutation(signs.begin(), signs.end()));
  }
}

TEST_CASE("detect_conflicts") {
  const ConflictReport r = check(triangle(P, P, N));
  REQUIRE(r.conflicts.size() == 1);
  CHECK(r.conflicts[0].a == 0);
  CHECK(r.conflicts[0].b == 2);
  CHECK(r.conflicts[0].witness.nodes == std::vector<NodeId>{0, 1, 2});

  CHECK(check(triangle(N, N, N)).empty());
  CHECK(check(triangle(P, N, N)).empty());
}

TEST_CASE("detect_conflicts finds long-range violations") {
  // 0-1-2-3-4 positive chain plus a negative chord 0-4.
  LabeledDataset d;
  for (NodeId v = 0; v < 5; ++v) d.sentences.push_back({v, "s" + std::to_string(v), {}});
  d.pairs = {make_pair(0, 1, P), make_pair(0, 4, N), make_pair(1, 2, P), make_pair(2, 3, P), make_pair(3, 4, P)};
  const ConflictReport r = check(d);
  REQUIRE(r.conflicts.size() == 1);
  CHECK(r.conflicts[0].witness.length() == 4);
}

TEST_CASE("is_weakly_balanced") {
  auto balanced = [](const LabeledDataset& d) {
    const auto g = build_graph(d);
    return is_weakly_balanced(g, positive_components(g));
  };
  CHECK_FALSE(balanced(triangle(P, P, N)));
  CHECK(balanced(triangle(P, P, P)));
  CHECK(balanced(triangle(N, N, N)));
}

TEST_CASE("flip_conflicts") {
  const LabeledDataset d = triangle(P, P, N);
  const FlipResult r = flip_conflicts(d, check(d));
  REQUIRE(r.dataset.pairs.size() == 3);
  for (const LabeledPair& p : r.dataset.pairs) CHECK(p.label == P);
  CHECK(r.dataset.pairs[1].provenance == Provenance::Flipped);
  CHECK(r.dataset.pairs[0].provenance == Provenance::Original);
  REQUIRE(r.log.flipped.size() == 1);
  CHECK(r.log.flipped[0].old_sign == N);
  CHECK(r.log.flipped[0].new_sign == P);
  CHECK(r.log.merged.empty());
  CHECK_NOTHROW(r.dataset.validate());

  const LabeledDataset clean = triangle(P, P, P);
  const FlipResult same = flip_conflicts(clean, check(clean));
  CHECK(same.dataset.pairs == clean.pairs);
  CHECK(same.log.flipped.empty());
}

TEST_CASE("flip_conflicts rejects reports that do not match the dataset") {
  const LabeledDataset d = triangle(P, P, N);
  ConflictReport bogus;
  bogus.conflicts.push_back({0, 1, {{0, 1}}, 0});  // (0,1) is positive
  CHECK_THROWS_AS(flip_conflicts(d, bogus), DatasetError);
  bogus.conflicts[0] = {1, 7, {{1, 7}}, 0};
  CHECK_THROWS_AS(flip_conflicts(d, bogus), DatasetError);
}

TEST_CASE("flip_conflicts folds a flipped copy into an existing positive pair") {
  // Hand-assembled dataset holding (0,2) both ways; parse_dataset never does this.
  LabeledDataset d = triangle(P, P, N);
  d.pairs.push_back(make_pair(0, 2, P));
  ConflictReport report;
  report.conflicts.push_back({0, 2, {{0, 1, 2}}, 0});
  const FlipResult r = flip_conflicts(d, report);
  CHECK(r.dataset.pairs.size() == 3);
  REQUIRE(r.log.merged.size() == 1);
  CHECK(r.log.flipped.size() == 1);
  CHECK(r.dataset.pairs.size() == d.pairs.size() - r.log.merged.size());
  CHECK(r.dataset.pairs[1].provenance == Provenance::Original);
  CHECK_NOTHROW(r.dataset.validate());
}

TEST_CASE("property: conflict detection is sound and complete") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const auto rg = oracle::random_graph(rng);
    const auto g = ParaphraseGraph::from_edges(rg.n, rg.edges);
    const ClusterIndex idx = positive_components(g);
    const ConflictReport r = detect_conflicts(g, idx);

    oracle::PairSet found;
    for (std::size_t i = 0; i < r.conflicts.size(); ++i) {
      const Conflict& c = r.conflicts[i];
      if (i) CHECK(std::tie(r.conflicts[i - 1].a, r.conflicts[i - 1].b) < std::tie(c.a, c.b));
      found.emplace(c.a, c.b);
      CHECK(g.sign_between(c.a, c.b) == N);
      CHECK(c.witness.nodes.front() == c.a);
      CHECK(c.witness.nodes.back() == c.b);
      CHECK(c.cluster == idx.cluster_of(c.a));
      for (std::size_t k = 1; k < c.witness.nodes.size(); ++k) {
        CHECK(g.sign_between(c.witness.nodes[k - 1], c.witness.nodes[k]) == P);
      }
    }
    CHECK(found == oracle::conflicted_edges(rg));
    CHECK(is_weakly_balanced(g, idx) == found.empty());
  }
}

TEST_CASE("property: flipping repairs, conserves and keeps clusters") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 300; ++trial) {
    const auto rg = oracle::random_graph(rng);
    const LabeledDataset d = oracle::to_dataset(rg);
    const auto g = build_graph(d);
    const ClusterIndex before = positive_components(g);
    const ConflictReport report = detect_conflicts(g, before);
    const FlipResult flipped = flip_conflicts(d, report);

    CHECK(flipped.dataset.pairs.size() == d.pairs.size() - flipped.log.merged.size());
    CHECK(flipped.log.flipped.size() == report.conflicts.size());
    for (std::size_t i = 0; i < d.pairs.size(); ++i) {
      const LabeledPair& in = d.pairs[i];
      const LabeledPair& out = flipped.dataset.pairs[i];
      const bool was_conflict = std::any_of(report.conflicts.begin(), report.conflicts.end(),
                                            [&](const Conflict& c) { return c.a == in.a && c.b == in.b; });
      if (was_conflict) {
        CHECK(out.label == P);
        CHECK(out.provenance == Provenance::Flipped);
      } else {
        CHECK(out == in);
      }
    }

    const auto g2 = build_graph(flipped.dataset);
    const ClusterIndex after = positive_components(g2);
    CHECK(detect_conflicts(g2, after).empty());
    for (NodeId v = 0; v < rg.n; ++v) CHECK(before.cluster_of(v) == after.cluster_of(v));

    const FlipResult again = flip_conflicts(flipped.dataset, detect_conflicts(g2, after));
    CHECK(again.dataset.pairs == flipped.dataset.pairs);
    CHECK(again.log.flipped.empty());
  }
}

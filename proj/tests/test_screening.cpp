#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "poolkit/screening.hpp"

using namespace poolkit;

namespace {

// cycle design: clone i in pools {i, i+1 mod v}
PoolingDesign cycle_design(int n) {
  PoolingDesign d;
  d.n = n;
  d.v = n;
  d.k = 2;
  d.t = 2;
  d.kind = DesignKind::explicit_kind;
  for (int i = 0; i < n; ++i) {
    std::vector<int> row = {i, (i + 1) % n};
    std::sort(row.begin(), row.end());
    d.assignment.push_back(row);
  }
  return d;
}

// the 20-pool row-and-column figure layout (8 rows, 12 cols, no dish pool)
PoolingDesign figure_rowcol() {
  PoolingDesign d;
  d.n = 96;
  d.v = 20;
  d.k = 2;
  d.t = 2;
  d.kind = DesignKind::explicit_kind;
  for (int w = 0; w < 96; ++w)
    d.assignment.push_back({w / 12, 8 + w % 12});
  return d;
}

}  // namespace

TEST_CASE("draw_positives basics") {
  const LibraryModel none(100, 1e-12);
  CHECK(draw_positives(none, RngSeed{3}).empty());

  const LibraryModel model(1000, 5.0);
  const auto a = draw_positives(model, RngSeed{42});
  const auto b = draw_positives(model, RngSeed{42});
  CHECK(a == b);
  CHECK(std::is_sorted(a.begin(), a.end()));
}

TEST_CASE("draw_positives matches the binomial mean") {
  const LibraryModel model(100000, 10.0);
  double sum = 0;
  const long reps = 10000;
  for (long r = 0; r < reps; ++r)
    sum += static_cast<double>(draw_positives(model, substream(RngSeed{7}, r)).size());
  const double mean = sum / reps;
  const double sigma = std::sqrt(10.0 * (1 - 1e-4) / reps);
  CHECK(std::abs(mean - 10.0) < 3 * sigma);
}

TEST_CASE("assay_pools truth table and error forcing") {
  const PoolingDesign d = cycle_design(5);
  CHECK(assay_pools(d, {}, {0.0, 0.0}, RngSeed{1}).pools ==
        std::vector<std::uint8_t>{0, 0, 0, 0, 0});
  CHECK(assay_pools(d, {}, {1.0, 0.0}, RngSeed{1}).pools ==
        std::vector<std::uint8_t>{1, 1, 1, 1, 1});
  const auto noerr = assay_pools(d, {0}, {0.0, 0.0}, RngSeed{1});
  CHECK(noerr.pools == std::vector<std::uint8_t>{1, 1, 0, 0, 0});
  CHECK_THROWS_AS(assay_pools(d, {9}, {0.0, 0.0}, RngSeed{1}),
                  std::invalid_argument);
  CHECK_THROWS(check_error_model({1.5, 0.0}));
}

TEST_CASE("figure scenario: only the four covering pools are positive") {
  const PoolingDesign d = figure_rowcol();
  const int p1 = 2 * 12 + 2;  // row 3, column 3 (1-based)
  const int p2 = 4 * 12 + 7;  // row 5, column 8
  const auto outcome = assay_pools(d, {p1, p2}, {0.0, 0.0}, RngSeed{1});
  long positive = 0;
  for (auto b : outcome.pools) positive += b;
  CHECK(positive == 4);
  CHECK(outcome.pools[2] == 1);       // row 3
  CHECK(outcome.pools[4] == 1);       // row 5
  CHECK(outcome.pools[8 + 2] == 1);   // column 3
  CHECK(outcome.pools[8 + 7] == 1);   // column 8

  const auto rep = classify_truth(d, {p1, p2});
  CHECK(rep.count(CloneCategory::unresolved_negative) == 2);
  CHECK(rep.count(CloneCategory::resolved_negative) == 92);
  CHECK(rep.count(CloneCategory::unresolved_positive) == 2);
}

TEST_CASE("classify_truth on the five-pool cycle") {
  const PoolingDesign d = cycle_design(5);
  const auto rep = classify_truth(d, {0});
  CHECK(rep.category[0] == CloneCategory::resolved_positive);
  for (int i = 1; i < 5; ++i)
    CHECK(rep.category[static_cast<std::size_t>(i)] ==
          CloneCategory::resolved_negative);
}

TEST_CASE("all-positive library: resolution needs a private pool") {
  const PoolingDesign d = cycle_design(4);
  std::vector<int> everyone = {0, 1, 2, 3};
  const auto rep = classify_truth(d, everyone);
  CHECK(rep.count(CloneCategory::resolved_negative) == 0);
  CHECK(rep.count(CloneCategory::unresolved_negative) == 0);
  // every pool holds two positive clones, so nobody is resolved
  CHECK(rep.count(CloneCategory::resolved_positive) == 0);
  CHECK(rep.count(CloneCategory::unresolved_positive) == 4);
}

TEST_CASE("category counts partition the library") {
  const PoolingDesign d = cycle_design(30);
  const LibraryModel model(30, 4.0);
  for (long r = 0; r < 50; ++r) {
    const auto pos = draw_positives(model, substream(RngSeed{5}, r));
    const auto rep = classify_truth(d, pos);
    CHECK(rep.counts[0] + rep.counts[1] + rep.counts[2] + rep.counts[3] == 30);
    CHECK(rep.counts[0] + rep.counts[1] == static_cast<long>(pos.size()));
  }
}

TEST_CASE("classify_observed extremes and zero-error cross-check") {
  const PoolingDesign d = cycle_design(6);
  AssayOutcome all_neg;
  all_neg.pools.assign(6, 0);
  const auto neg = classify_observed(d, all_neg);
  CHECK(neg.candidate_count == 0);
  CHECK(neg.observed_negative_count == 6);

  AssayOutcome all_pos;
  all_pos.pools.assign(6, 1);
  CHECK(classify_observed(d, all_pos).candidate_count == 6);

  // zero-error: candidates are exactly positives plus unresolved negatives
  const LibraryModel model(6, 2.0);
  for (long r = 0; r < 40; ++r) {
    const auto pos = draw_positives(model, substream(RngSeed{11}, r));
    const auto outcome = assay_pools(d, pos, {0.0, 0.0}, RngSeed{0});
    const auto part = classify_observed(d, outcome);
    const auto rep = classify_truth(d, pos);
    CHECK(part.candidate_count ==
          rep.count(CloneCategory::resolved_positive) +
              rep.count(CloneCategory::unresolved_positive) +
              rep.count(CloneCategory::unresolved_negative));
    for (int i = 0; i < 6; ++i) {
      const bool cand = part.is_candidate[static_cast<std::size_t>(i)] != 0;
      const auto cat = rep.category[static_cast<std::size_t>(i)];
      CHECK(cand == (cat != CloneCategory::resolved_negative));
    }
  }
}

TEST_CASE("simulation tracks the closed forms on a small shape") {
  const DesignShape s(10, 3);
  const LibraryModel model(40, 2.0);
  const auto sim =
      simulate_metrics_random_ksets(s, model, {0.0, 0.0}, 100000, RngSeed{21});
  const double nbar =
      static_cast<double>(unresolved_negatives_exact(model, s));
  const double pbar = static_cast<double>(unresolved_positives_exact(model, s));
  CHECK(std::abs(sim.unresolved_negative.mean - nbar) <
        3 * sim.unresolved_negative.se);
  CHECK(std::abs((2.0 - sim.resolved_positive.mean) - pbar) <
        3 * sim.resolved_positive.se);
  CHECK(sim.mean_positives == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("fixed-instance simulation agrees with per-replicate classification") {
  const PoolingDesign d = cycle_design(25);
  const LibraryModel model(25, 3.0);
  const auto sim = simulate_metrics(d, model, {0.0, 0.0}, 2000, RngSeed{9});
  // replay the replicates directly
  double rp = 0, un = 0;
  for (long r = 0; r < 2000; ++r) {
    Rng rng(substream(RngSeed{9}, static_cast<std::uint64_t>(r)));
    const long pcount = rng.binomial(25, 3.0 / 25);
    const auto pos = rng.ksubset(25, static_cast<int>(pcount));
    const auto rep = classify_truth(d, pos);
    rp += static_cast<double>(rep.count(CloneCategory::resolved_positive));
    un += static_cast<double>(rep.count(CloneCategory::unresolved_negative));
  }
  CHECK(sim.resolved_positive.mean == doctest::Approx(rp / 2000));
  CHECK(sim.unresolved_negative.mean == doctest::Approx(un / 2000));
  // conditional table masses total the replicate count
  long total = 0;
  for (const auto& row : sim.resolved_given_p)
    for (long x : row) total += x;
  CHECK(total == 2000);
}

TEST_CASE("raising the false-negative rate cannot raise observed-positive pools") {
  const PoolingDesign d = cycle_design(40);
  const LibraryModel model(40, 6.0);
  double mean_pos_pools[2] = {0, 0};
  const double fns[2] = {0.05, 0.5};
  for (int which = 0; which < 2; ++which) {
    for (long r = 0; r < 3000; ++r) {
      const auto pos = draw_positives(model, substream(RngSeed{31}, r));
      const auto outcome =
          assay_pools(d, pos, {0.01, fns[which]}, substream(RngSeed{77}, r));
      for (auto b : outcome.pools) mean_pos_pools[which] += b;
    }
    mean_pos_pools[which] /= 3000;
  }
  CHECK(mean_pos_pools[1] < mean_pos_pools[0]);
}

TEST_CASE("candidate statistics appear only when errors are simulated") {
  const DesignShape s(12, 3);
  const LibraryModel model(60, 2.0);
  const auto clean =
      simulate_metrics_random_ksets(s, model, {0.0, 0.0}, 500, RngSeed{3});
  CHECK_FALSE(clean.has_candidates);
  const auto noisy =
      simulate_metrics_random_ksets(s, model, {0.05, 0.1}, 500, RngSeed{3});
  CHECK(noisy.has_candidates);
  CHECK(noisy.candidates.mean > 0);
}

TEST_CASE("collapsed and explicit random-design simulations agree") {
  // same distribution: compare means within joint standard errors
  const DesignShape s(12, 3);
  const LibraryModel model(50, 2.5);
  const auto fast =
      simulate_metrics_random_ksets(s, model, {0.0, 0.0}, 60000, RngSeed{13});
  double rp = 0, un = 0;
  const long reps = 20000;
  for (long r = 0; r < reps; ++r) {
    const auto d =
        generate_random_ksets(50, s, substream(RngSeed{14}, static_cast<std::uint64_t>(r)));
    Rng rng(substream(RngSeed{15}, static_cast<std::uint64_t>(r)));
    const auto pos = rng.ksubset(50, static_cast<int>(rng.binomial(50, 0.05)));
    const auto rep = classify_truth(d, pos);
    rp += static_cast<double>(rep.count(CloneCategory::resolved_positive));
    un += static_cast<double>(rep.count(CloneCategory::unresolved_negative));
  }
  CHECK(std::abs(fast.resolved_positive.mean - rp / reps) < 0.03);
  CHECK(std::abs(fast.unresolved_negative.mean - un / reps) < 0.1);
}

TEST_CASE("assay file round-trip") {
  AssayOutcome out;
  out.pools = {1, 0, 0, 1, 1, 0};
  const std::string path = "/tmp/poolkit_assay_test.txt";
  write_assay_file(path, out);
  const AssayOutcome back = read_assay_file(path);
  CHECK(back.pools == out.pools);
  CHECK_FALSE(back.simulated);
}

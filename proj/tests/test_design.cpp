#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "poolkit/design.hpp"
#include "poolkit/screening.hpp"

using namespace poolkit;

namespace {

long sum_pool_sizes(const PoolingDesign& d) {
  long total = 0;
  for (const auto& row : d.assignment) total += static_cast<long>(row.size());
  return total;
}

// colex rank of a sorted k-subset
long kset_rank(const std::vector<int>& s) {
  long r = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    r += static_cast<long>(binom_big(s[i], static_cast<long>(i) + 1));
  return r;
}

}  // namespace

TEST_CASE("random k-sets basics") {
  const PoolingDesign one = generate_random_ksets(1, DesignShape(3, 3), RngSeed{9});
  CHECK(one.assignment.front() == std::vector<int>{0, 1, 2});

  const PoolingDesign a = generate_random_ksets(5, DesignShape(6, 2), RngSeed{1});
  const PoolingDesign b = generate_random_ksets(5, DesignShape(6, 2), RngSeed{1});
  const PoolingDesign c = generate_random_ksets(5, DesignShape(6, 2), RngSeed{2});
  CHECK(a == b);
  CHECK(a.assignment != c.assignment);
  for (const auto& row : a.assignment) {
    CHECK(row.size() == 2);
    CHECK(row[0] < row[1]);
    CHECK(row[1] < 6);
  }
  CHECK(sum_pool_sizes(a) == 5 * 2);
}

TEST_CASE("random k-sets frequencies are uniform (chi-square, alpha=0.01)") {
  // 1e5 draws over C(47,4) cells, binned by colex rank mod 100.
  const int bins = 100;
  const long cells = 178365;
  const PoolingDesign d =
      generate_random_ksets(100000, DesignShape(47, 4), RngSeed{1});
  std::vector<long> observed(bins, 0);
  for (const auto& row : d.assignment) ++observed[kset_rank(row) % bins];
  std::vector<long> bin_cells(bins, 0);
  for (long r = 0; r < cells; ++r) ++bin_cells[r % bins];
  double stat = 0;
  for (int b = 0; b < bins; ++b) {
    const double expected =
        100000.0 * static_cast<double>(bin_cells[b]) / static_cast<double>(cells);
    const double diff = static_cast<double>(observed[b]) - expected;
    stat += diff * diff / expected;
  }
  CHECK(stat < 134.642);  // chi-square df=99 upper 1% point
}

TEST_CASE("ksets packing honors intersection bound and balance") {
  PackingConstraints pc;
  pc.t = 2;
  pc.balance = {{109, 111}};
  const PoolingDesign d =
      generate_ksets_packing(1298, DesignShape(47, 4), pc, RngSeed{1});
  const ValidationReport rep = validate(d, ExpectedProperties{4, 2, {{109, 111}}});
  CHECK(rep.ok());
  CHECK(rep.max_pairwise_intersection <= 2);
  CHECK(rep.min_pool_size >= 109);
  CHECK(rep.max_pool_size <= 111);
  CHECK(rep.duplicate_kset_pairs == 0);
  CHECK(sum_pool_sizes(d) == 1298L * 4);
}

TEST_CASE("packing with t = k never rejects") {
  PackingConstraints pc;
  pc.t = 2;
  pc.max_retries = 1;  // any rejection would throw immediately
  const PoolingDesign d = generate_ksets_packing(30, DesignShape(40, 2), pc, RngSeed{3});
  CHECK(d.n == 30);
  PackingConstraints vac;
  vac.t = 3;
  vac.max_retries = 1;
  CHECK_NOTHROW(generate_ksets_packing(500, DesignShape(12, 3), vac, RngSeed{3}));
}

TEST_CASE("infeasible packing reports GenerationExhausted") {
  PackingConstraints pc;
  pc.t = 0;
  pc.max_retries = 2000;
  CHECK_THROWS_AS(generate_ksets_packing(3, DesignShape(4, 2), pc, RngSeed{1}),
                  GenerationExhausted);
}

TEST_CASE("infeasible balance range rejected up front") {
  PackingConstraints pc;
  pc.t = 2;
  pc.balance = {{1, 2}};  // 1298*4/47 ~ 110 not in [1,2]
  CHECK_THROWS_AS(generate_ksets_packing(1298, DesignShape(47, 4), pc, RngSeed{1}),
                  std::invalid_argument);
}

TEST_CASE("row-and-column design") {
  const PoolingDesign big = generate_row_column(94, 8, 8, 12);
  CHECK(big.v == 94 * 28);
  CHECK(big.v == 2632);
  CHECK(big.n == 72192);

  const PoolingDesign d = generate_row_column(1, 1, 8, 12);
  CHECK(d.n == 96);
  CHECK(d.v == 8 + 12 + 1);
  for (const auto& row : d.assignment) CHECK(row.size() == 3);

  // two clones share at most a row/col pool plus possibly the dish pool
  const ValidationReport rep = validate(d);
  CHECK(rep.max_pairwise_intersection <= 2);
}

TEST_CASE("row-and-column matches the two-positive single-dish scenario") {
  const PoolingDesign d = generate_row_column(1, 1, 8, 12);
  // positives at (row 3, col 3) and (row 5, col 8), 1-based as in the figure
  const int p1 = 2 * 12 + 2;
  const int p2 = 4 * 12 + 7;
  const auto rep = classify_truth(d, {p1, p2});
  CHECK(rep.count(CloneCategory::unresolved_negative) == 2);
  CHECK(rep.count(CloneCategory::resolved_negative) == 92);
  CHECK(rep.count(CloneCategory::unresolved_positive) == 2);
  CHECK(rep.count(CloneCategory::resolved_positive) == 0);
  // exactly 4 of the row/column pools are covered
  std::set<int> covered;
  for (int clone : {p1, p2})
    for (int pool : d.assignment[static_cast<std::size_t>(clone)])
      if (pool < 20) covered.insert(pool);
  CHECK(covered.size() == 4);
}

TEST_CASE("cubic design") {
  const PoolingDesign d = generate_cubic(4000, 43, 2, RngSeed{5});
  CHECK(d.v == 258);
  CHECK(d.k == 6);
  for (const auto& row : d.assignment) {
    CHECK(row.size() == 6);
    // one pool from each of the six coordinate groups
    for (int g = 0; g < 6; ++g) {
      CHECK(row[static_cast<std::size_t>(g)] >= g * 43);
      CHECK(row[static_cast<std::size_t>(g)] < (g + 1) * 43);
    }
  }

  const PoolingDesign full = generate_cubic(8, 2, 1, RngSeed{5});
  CHECK(full.v == 6);
  const auto members = pool_members(full);
  for (const auto& m : members) CHECK(m.size() == 4);

  CHECK_THROWS_AS(generate_cubic(9, 2, 1, RngSeed{5}), std::invalid_argument);
}

TEST_CASE("validation report flags duplicates and handles empty designs") {
  PoolingDesign d;
  d.n = 3;
  d.v = 5;
  d.k = 2;
  d.t = 2;
  d.assignment = {{0, 1}, {0, 1}, {2, 3}};
  const ValidationReport rep = validate(d);
  CHECK(rep.duplicate_kset_pairs == 1);
  CHECK(rep.max_pairwise_intersection == 2);

  PoolingDesign empty;
  empty.v = 4;
  const ValidationReport erep = validate(empty);
  CHECK(erep.n == 0);
  CHECK(erep.ok());
}

TEST_CASE("serialization round-trips byte-exactly") {
  const PoolingDesign designs[] = {
      generate_random_ksets(20, DesignShape(9, 3), RngSeed{11}),
      generate_row_column(2, 2, 3, 4),
      generate_cubic(20, 3, 2, RngSeed{11}),
  };
  for (const auto& d : designs) {
    const std::string text = serialize(d);
    const PoolingDesign back = parse_design(text);
    CHECK(back == d);
    CHECK(serialize(back) == text);
  }

  PackingConstraints pc;
  pc.t = 1;
  const PoolingDesign p = generate_ksets_packing(10, DesignShape(12, 2), pc, RngSeed{4});
  CHECK(parse_design(serialize(p)) == p);
}

TEST_CASE("design file parsing accepts comments and rejects malformed input") {
  const PoolingDesign d = parse_design("# a comment\n2 4 2 2\n0 1\n1 3\n");
  CHECK(d.n == 2);
  CHECK(d.kind == DesignKind::explicit_kind);

  CHECK_THROWS(parse_design("2 4 2\n0 1\n1 3\n"));          // short header
  CHECK_THROWS(parse_design("2 4 2 2\n0 1\n"));             // missing row
  CHECK_THROWS(parse_design("2 4 2 2\n1 0\n1 3\n"));        // unsorted
  CHECK_THROWS(parse_design("2 4 2 2\n0 4\n1 3\n"));        // out of range
  CHECK_THROWS(parse_design("2 4 2 2\n0 1 2\n1 3\n"));      // size != k
  CHECK_THROWS(parse_design("2 4 2 2\n0 1\n1 3\n0 2\n"));   // extra row
}

TEST_CASE("fixed seed regenerates identical serialized designs") {
  const std::string first =
      serialize(generate_random_ksets(50, DesignShape(20, 4), RngSeed{77}));
  const std::string second =
      serialize(generate_random_ksets(50, DesignShape(20, 4), RngSeed{77}));
  CHECK(first == second);
}

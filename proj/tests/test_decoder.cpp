#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "poolkit/decoder.hpp"
#include "poolkit/design.hpp"

using namespace poolkit;

namespace {

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

AssayOutcome make_outcome(std::vector<std::uint8_t> pools) {
  AssayOutcome out;
  out.pools = std::move(pools);
  return out;
}

}  // namespace

TEST_CASE("log likelihood closed cases") {
  const PoolingDesign d = cycle_design(6);
  const auto empty = make_hypothesis(d, {});
  const auto allzero = make_outcome({0, 0, 0, 0, 0, 0});
  CHECK(log_likelihood(allzero, empty, {0.01, 0.1}, 6) ==
        doctest::Approx(6 * std::log(0.99)));

  // uninformative rates: v * log(1/2) whatever the hypothesis
  const auto some = make_outcome({1, 0, 1, 0, 0, 1});
  for (const auto& hyp :
       {make_hypothesis(d, {}), make_hypothesis(d, {0}), make_hypothesis(d, {1, 4})}) {
    CHECK(log_likelihood(some, hyp, {0.5, 0.5}, 6) ==
          doctest::Approx(6 * std::log(0.5)));
  }
}

TEST_CASE("log likelihood matches a direct product evaluation") {
  const PoolingDesign d = cycle_design(6);
  const ErrorModel e{0.07, 0.13};
  const auto outcome = make_outcome({1, 1, 0, 0, 1, 0});
  for (const auto& clones :
       std::vector<std::vector<int>>{{}, {0}, {2, 3}, {0, 1, 4}}) {
    const auto hyp = make_hypothesis(d, clones);
    double direct = 0;
    for (int pool = 0; pool < 6; ++pool) {
      const bool covered =
          std::find(hyp.covered_pools.begin(), hyp.covered_pools.end(), pool) !=
          hyp.covered_pools.end();
      const bool obs = outcome.pools[static_cast<std::size_t>(pool)];
      if (covered)
        direct += std::log(obs ? 1 - e.fn : e.fn);
      else
        direct += std::log(obs ? e.fp : 1 - e.fp);
    }
    CHECK(log_likelihood(outcome, hyp, e, 6) == doctest::Approx(direct));
  }
}

TEST_CASE("flipping one pool shifts the log likelihood by one factor") {
  const PoolingDesign d = cycle_design(8);
  const ErrorModel e{0.02, 0.15};
  const auto hyp = make_hypothesis(d, {1, 5});
  auto outcome = make_outcome({0, 1, 1, 0, 0, 1, 1, 0});
  const double base = log_likelihood(outcome, hyp, e, 8);
  for (int pool = 0; pool < 8; ++pool) {
    auto flipped = outcome;
    flipped.pools[static_cast<std::size_t>(pool)] ^= 1;
    const bool covered =
        std::find(hyp.covered_pools.begin(), hyp.covered_pools.end(), pool) !=
        hyp.covered_pools.end();
    const bool was_pos = outcome.pools[static_cast<std::size_t>(pool)];
    double factor;
    if (covered)
      factor = was_pos ? std::log(e.fn) - std::log(1 - e.fn)
                       : std::log(1 - e.fn) - std::log(e.fn);
    else
      factor = was_pos ? std::log(1 - e.fp) - std::log(e.fp)
                       : std::log(e.fp) - std::log(1 - e.fp);
    CHECK(log_likelihood(flipped, hyp, e, 8) == doctest::Approx(base + factor));
  }
}

TEST_CASE("exact posterior identifies the only consistent explanation") {
  const PoolingDesign d = cycle_design(8);  // no duplicate pair sets
  auto outcome = make_outcome({0, 0, 0, 1, 1, 0, 0, 0});  // exactly clone 3's pools
  const ErrorModel e{1e-9, 1e-9};
  const auto post = posterior_exact(d, outcome, e, LibraryModel(8, 1.0));
  CHECK(post.by_clone[3].posterior > 0.999);
  for (int i = 0; i < 8; ++i)
    if (i != 3) CHECK(post.by_clone[static_cast<std::size_t>(i)].posterior < 1e-3);
  CHECK(post.order.front() == 3);
}

TEST_CASE("uninformative likelihood returns the prior") {
  const PoolingDesign d = cycle_design(7);
  const auto outcome = make_outcome({1, 0, 1, 0, 1, 0, 0});
  const auto post = posterior_exact(d, outcome, {0.5, 0.5}, LibraryModel(7, 2.0));
  for (const auto& e : post.by_clone)
    CHECK(e.posterior == doctest::Approx(2.0 / 7).epsilon(1e-9));
}

TEST_CASE("exact posterior equals the brute-force oracle with a corrupted pool") {
  const PoolingDesign d = cycle_design(5);
  auto outcome = make_outcome({1, 1, 0, 0, 0});
  outcome.pools[3] = 1;  // corrupted pool
  const ErrorModel e{0.05, 0.12};
  const LibraryModel model(5, 1.0);
  const auto post = posterior_exact(d, outcome, e, model);
  const auto brute = oracle::posterior_brute(d, outcome, e, 1.0 / 5);
  for (int i = 0; i < 5; ++i)
    CHECK(post.by_clone[static_cast<std::size_t>(i)].posterior ==
          doctest::Approx(brute[static_cast<std::size_t>(i)]).epsilon(1e-9));
}

TEST_CASE("posterior_exact rejects large instances") {
  const PoolingDesign d = cycle_design(21);
  const auto outcome = make_outcome(std::vector<std::uint8_t>(21, 0));
  CHECK_THROWS_AS(posterior_exact(d, outcome, {0.1, 0.1}, LibraryModel(21, 1.0)),
                  std::invalid_argument);
}

TEST_CASE("adding a covering positive pool never lowers the exact posterior") {
  const PoolingDesign d = cycle_design(6);
  const ErrorModel e{0.1, 0.2};
  const LibraryModel model(6, 1.5);
  auto outcome = make_outcome({0, 0, 1, 0, 0, 0});
  const double before =
      posterior_exact(d, outcome, e, model).by_clone[2].posterior;
  outcome.pools[3] = 1;  // clone 2 sits in pools {2,3}
  const double after =
      posterior_exact(d, outcome, e, model).by_clone[2].posterior;
  CHECK(after >= before);
}

TEST_CASE("gibbs matches exact marginals within 0.02 on noisy instances") {
  struct Instance {
    int n;
    double c, fp, fn;
    std::uint64_t seed;
  };
  const Instance cases[] = {
      {10, 1.5, 0.05, 0.10, 11},
      {11, 2.0, 0.10, 0.05, 22},
      {12, 2.5, 0.02, 0.20, 33},
      {9, 1.0, 0.15, 0.15, 44},
  };
  for (const auto& tc : cases) {
    const PoolingDesign d = cycle_design(tc.n);
    const LibraryModel model(tc.n, tc.c);
    // simulate a noisy outcome
    const auto pos = draw_positives(model, RngSeed{tc.seed});
    const auto outcome = assay_pools(d, pos, {tc.fp, tc.fn}, RngSeed{tc.seed + 1});
    const ErrorModel e{tc.fp, tc.fn};
    const auto exact = posterior_exact(d, outcome, e, model);
    const auto gibbs =
        posterior_gibbs(d, outcome, e, model, 4000, 500, 4, RngSeed{tc.seed + 2});
    for (int i = 0; i < tc.n; ++i) {
      CHECK(std::abs(gibbs.by_clone[static_cast<std::size_t>(i)].posterior -
                     exact.by_clone[static_cast<std::size_t>(i)].posterior) <
            0.02);
    }
    CHECK(gibbs.mixed);
  }
}

TEST_CASE("all-negative assay with tiny rates pushes posteriors below the prior") {
  const PoolingDesign d = cycle_design(10);
  const auto outcome = make_outcome(std::vector<std::uint8_t>(10, 0));
  const LibraryModel model(10, 2.0);
  const auto post =
      posterior_gibbs(d, outcome, {1e-6, 1e-6}, model, 2000, 200, 2, RngSeed{5});
  for (const auto& e : post.by_clone) CHECK(e.posterior <= 0.2 + 1e-9);
}

TEST_CASE("gibbs ranking is deterministic for a fixed seed") {
  const PoolingDesign d = cycle_design(12);
  const LibraryModel model(12, 2.0);
  const auto pos = draw_positives(model, RngSeed{9});
  const auto outcome = assay_pools(d, pos, {0.05, 0.1}, RngSeed{10});
  const auto a =
      posterior_gibbs(d, outcome, {0.05, 0.1}, model, 1000, 100, 3, RngSeed{77});
  const auto b =
      posterior_gibbs(d, outcome, {0.05, 0.1}, model, 1000, 100, 3, RngSeed{77});
  CHECK(a.order == b.order);
  for (int i = 0; i < 12; ++i)
    CHECK(a.by_clone[static_cast<std::size_t>(i)].posterior ==
          b.by_clone[static_cast<std::size_t>(i)].posterior);
}

TEST_CASE("subset-sampling reference stays near the exact posterior") {
  const PoolingDesign d = cycle_design(8);
  const LibraryModel model(8, 1.5);
  const auto pos = draw_positives(model, RngSeed{19});
  const auto outcome = assay_pools(d, pos, {0.08, 0.1}, RngSeed{20});
  const auto exact = posterior_exact(d, outcome, {0.08, 0.1}, model);
  const auto naive = posterior_subset_sampling(d, outcome, {0.08, 0.1}, model,
                                               40000, RngSeed{21});
  for (int i = 0; i < 8; ++i)
    CHECK(std::abs(naive.by_clone[static_cast<std::size_t>(i)].posterior -
                   exact.by_clone[static_cast<std::size_t>(i)].posterior) < 0.03);
}

TEST_CASE("rank_for_confirmation budgets") {
  const PoolingDesign d = cycle_design(6);
  const auto outcome = make_outcome({1, 1, 0, 0, 0, 0});
  const auto post = posterior_exact(d, outcome, {0.05, 0.05}, LibraryModel(6, 1.0));
  CHECK(rank_for_confirmation(post, 0).empty());
  const auto full = rank_for_confirmation(post, 6);
  CHECK(full.size() == 6);
  std::vector<int> sorted = full;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>{0, 1, 2, 3, 4, 5});  // a permutation
  CHECK(full.front() == 0);  // clone 0 covers both positive pools
  CHECK_THROWS_AS(rank_for_confirmation(post, 7), std::invalid_argument);
}

TEST_CASE("posterior CSV format") {
  const PoolingDesign d = cycle_design(4);
  const auto outcome = make_outcome({1, 1, 0, 0});
  const auto post = posterior_exact(d, outcome, {0.05, 0.05}, LibraryModel(4, 1.0));
  std::ostringstream os;
  write_posterior_csv(os, post);
  CHECK(os.str().rfind("clone_id,posterior,stderr,rank\n", 0) == 0);
  CHECK(std::count(os.str().begin(), os.str().end(), '\n') == 5);
}

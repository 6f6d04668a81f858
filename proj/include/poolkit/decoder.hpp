#pragma once

#include <vector>

#include "poolkit/screening.hpp"

namespace poolkit {

// A hypothesized positive set P with its covered-pool union (upsilon).
struct PositiveSetHypothesis {
  std::vector<int> clones;         // sorted
  std::vector<int> covered_pools;  // sorted union of the clones' pools
};

PositiveSetHypothesis make_hypothesis(const PoolingDesign& design,
                                      std::vector<int> clones);

// Exact log Pr(V | P) under the two-parameter error model; computed in log
// space, with 0/1 rates handled by the 0^0 = 1 and log 0 = -inf conventions.
double log_likelihood(const AssayOutcome& outcome,
                      const PositiveSetHypothesis& hypothesis,
                      const ErrorModel& errors, int v);

struct PosteriorEntry {
  int clone = 0;
  double posterior = 0;
  double se = 0;
  int rank = 0;  // 1 = most likely positive; ties broken by clone index
};

struct PosteriorRanking {
  std::vector<PosteriorEntry> by_clone;       // indexed by clone id
  std::vector<int> order;                     // clone ids, best first
  long sweeps = 0, burn_in = 0, chains = 0;
  double max_chain_spread = 0;                // across-chain marginal spread
  bool mixed = true;
};

// Full 2^n enumeration; n <= 20.
PosteriorRanking posterior_exact(const PoolingDesign& design,
                                 const AssayOutcome& outcome,
                                 const ErrorModel& errors,
                                 const LibraryModel& model);

// Single-site Gibbs over the inclusion vector, systematic sweep order,
// chains initialized from the prior; deterministic for a fixed seed.
PosteriorRanking posterior_gibbs(const PoolingDesign& design,
                                 const AssayOutcome& outcome,
                                 const ErrorModel& errors,
                                 const LibraryModel& model, long sweeps,
                                 long burn_in, int chains, RngSeed seed);

// Naive reference sampler from the paper's preliminary study: averages the
// likelihood over prior-drawn subsets with clone i forced in or out.
// Test-scale only; Gibbs is the production path.
PosteriorRanking posterior_subset_sampling(const PoolingDesign& design,
                                           const AssayOutcome& outcome,
                                           const ErrorModel& errors,
                                           const LibraryModel& model,
                                           long samples, RngSeed seed);

// Top `budget` clones by posterior.
std::vector<int> rank_for_confirmation(const PosteriorRanking& ranking, int budget);

void write_posterior_csv(std::ostream& out, const PosteriorRanking& ranking);

}  // namespace poolkit

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "poolkit/design.hpp"
#include "poolkit/metrics.hpp"
#include "poolkit/rng.hpp"

namespace poolkit {

// Pool-assay error rates, independent across pools.
struct ErrorModel {
  double fp = 0.0;  // false-positive rate lambda_{+|-}
  double fn = 0.0;  // false-negative rate lambda_{-|+}
};

void check_error_model(const ErrorModel& e);

struct AssayOutcome {
  std::vector<std::uint8_t> pools;  // length v, 0/1
  bool simulated = true;
};

enum class CloneCategory : std::uint8_t {
  resolved_positive = 0,
  unresolved_positive = 1,
  resolved_negative = 2,
  unresolved_negative = 3,
};

struct ClassificationReport {
  std::vector<CloneCategory> category;
  std::array<long, 4> counts{};
  long count(CloneCategory c) const { return counts[static_cast<std::size_t>(c)]; }
};

// Each clone positive independently with probability c/n; sorted indices.
std::vector<int> draw_positives(const LibraryModel& model, RngSeed seed);

// True pool states (OR over members), then independent per-pool flips.
AssayOutcome assay_pools(const PoolingDesign& design,
                         const std::vector<int>& positives,
                         const ErrorModel& errors, RngSeed seed);

// Error-free four-way classification: first mark unresolved negatives, then
// resolve positives against other positives and unresolved negatives.
ClassificationReport classify_truth(const PoolingDesign& design,
                                    const std::vector<int>& positives);

// Observed-data partition: a clone in any observed-negative pool is
// observed-negative; the rest are candidates for confirmation/decoding.
struct ObservedPartition {
  std::vector<std::uint8_t> is_candidate;
  long candidate_count = 0;
  long observed_negative_count = 0;
};
ObservedPartition classify_observed(const PoolingDesign& design,
                                    const AssayOutcome& outcome);

struct CategoryStats {
  double mean = 0;
  double se = 0;
};

struct SimulationResult {
  long replicates = 0;
  CategoryStats resolved_positive, unresolved_positive;
  CategoryStats resolved_negative, unresolved_negative;
  CategoryStats candidates;  // only meaningful when errors were simulated
  bool has_candidates = false;
  double mean_positives = 0;
  // resolved_given_p[p][j]: replicates with p positives of which j resolved.
  std::vector<std::vector<long>> resolved_given_p;
};

// Fixed-design Monte Carlo over independently seeded replicates.
SimulationResult simulate_metrics(const PoolingDesign& design,
                                  const LibraryModel& model,
                                  const ErrorModel& errors, long replicates,
                                  RngSeed seed);

// Fresh random k-sets design per replicate.  Only the positives' and
// unresolved negatives' k-sets are ever materialized: negatives that avoid
// the positive-pool union are resolved regardless of their sets, so their
// count is drawn directly from the induced binomial.
SimulationResult simulate_metrics_random_ksets(DesignShape shape,
                                               const LibraryModel& model,
                                               const ErrorModel& errors,
                                               long replicates, RngSeed seed);

void write_simulation_csv(std::ostream& out, const SimulationResult& result);
void write_assay_file(const std::string& path, const AssayOutcome& outcome);
AssayOutcome read_assay_file(const std::string& path);

}  // namespace poolkit

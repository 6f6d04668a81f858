#pragma once

#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "poolkit/metrics.hpp"

namespace poolkit {

enum class OptMethod { exact_eq_positives, approx_correlated };

struct OptimizationTarget {
  double fraction = 0.5;  // target resolved-positive fraction of c
  OptMethod method = OptMethod::approx_correlated;
  std::optional<std::pair<int, int>> k_range;  // inclusive; default [1, min(v,40)]
  std::pair<int, int> v_range{1, 2048};
  MetricsOptions metrics;
};

struct OptimizationResult {
  int v_min = 0;
  int k_opt = 0;
  double achieved = 0;                // resolved-positive expectation at (v_min, k_opt)
  double unresolved_negatives = 0;    // asymptotic formula at the optimum
  double clones_per_pool = 0;         // n * k / v
};

// Best k at fixed v: maximizes the resolved-positive expectation, ties to
// the smaller k (fewer transfers).
std::pair<int, double> optimal_k(const LibraryModel& model, int v,
                                 const OptimizationTarget& target);

// Smallest v in v_range whose best-k expectation reaches fraction * c.
// Bisection on v; falls back to a linear scan if the feasibility predicate
// turns out non-monotone on the probed points.
OptimizationResult min_pools(const LibraryModel& model,
                             const OptimizationTarget& target);

struct SweepRow {
  long n = 0;
  double c = 0;
  double fraction = 0;
  int v_min = 0;
  int k_opt = 0;
  double resolved_exp = 0;
  double unresolved_neg_exp = 0;
};

// Row-major (n outer, c inner) table over the given axes; cells are
// independent and computed concurrently when threads > 1.
std::vector<SweepRow> sweep_grid(const std::vector<long>& n_values,
                                 const std::vector<double>& c_values,
                                 double fraction, OptMethod method, int threads = 1);

// Logarithmically spaced axis helpers for sweep ranges.
std::vector<long> log_space_long(long lo, long hi, int steps);
std::vector<double> log_space(double lo, double hi, int steps);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace poolkit

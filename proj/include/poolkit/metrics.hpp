#pragma once

#include <optional>
#include <string>

#include "poolkit/combinatorics.hpp"

namespace poolkit {

// Binomial library model: each of n clones is positive with probability c/n.
struct LibraryModel {
  long n = 1;
  double c = 1.0;
  LibraryModel(long n_, double c_) : n(n_), c(c_) {
    if (!(c > 0.0) || !(c < static_cast<double>(n)))
      throw std::invalid_argument("LibraryModel: need 0 < c < n");
  }
};

struct MetricsResult {
  Real n_bar;                 // expected unresolved negatives
  Real p_bar;                 // expected unresolved positives
  Real resolved_negatives;    // n - c - n_bar
  Real resolved_positives;    // c - p_bar
  Real confirmatory_load;     // c + n_bar
  std::string method;
  unsigned digits = kDefaultPrecisionDigits;
};

struct MetricsOptions {
  unsigned digits = kDefaultPrecisionDigits;
  // Truncate sums over the number of positives once the binomial tail mass
  // drops below this.
  double p_tail = 1e-12;
  // Largest acceptable summand count for the exact unresolved-positives sum.
  double summand_budget = 5e9;
  bool convergence_check = true;
};

// Expected unresolved negatives.
Real unresolved_negatives_exact(const LibraryModel& model, DesignShape shape,
                                const MetricsOptions& opts = {});
Real unresolved_negatives_asymptotic(const LibraryModel& model, DesignShape shape,
                                     const MetricsOptions& opts = {});
Real unresolved_negatives_independent_pools(const LibraryModel& model,
                                            DesignShape shape,
                                            const MetricsOptions& opts = {});

// Expected unresolved positives.
Real unresolved_positives_exact(const LibraryModel& model, DesignShape shape,
                                const MetricsOptions& opts = {});
enum class PositiveApprox { independent_pools, correlated };
Real unresolved_positives_approx(const LibraryModel& model, DesignShape shape,
                                 PositiveApprox variant,
                                 const MetricsOptions& opts = {});

// Summand count of the exact unresolved-positives evaluation at this shape.
double exact_positives_summands(DesignShape shape);

// All-rational evaluation over the full p-range, for the oracle regime
// (small n); exact, no truncation.
Rational unresolved_negatives_exact_rational(long n, const Rational& c,
                                             DesignShape shape);
Rational unresolved_positives_exact_rational(long n, const Rational& c,
                                             DesignShape shape);

enum class MetricsMethod { exact, asymptotic, independent_pools };

// n_bar and p_bar for a random k-sets design plus the derived counts.
MetricsResult evaluate_random_ksets(const LibraryModel& model, DesignShape shape,
                                    MetricsMethod method,
                                    const MetricsOptions& opts = {});

}  // namespace poolkit

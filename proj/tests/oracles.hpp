#pragma once

// Brute-force reference computations, independent of the library's
// evaluation paths.  Everything here enumerates directly over positive
// subsets and k-set assignments in exact rational arithmetic.

#include <vector>

#include "poolkit/combinatorics.hpp"
#include "poolkit/screening.hpp"

namespace poolkit::oracle {

// All k-subsets of {0..v-1} as bitmasks.
std::vector<unsigned> all_ksets(int v, int k);

// Pr(j specified pools all covered by >=1 of p uniform k-sets).
Rational coverage_K_brute(int p, int j, DesignShape shape);

// Pr(j specified pools are exactly the uncovered pools).
Rational negpools_L_brute(int p, int j, DesignShape shape);

// Expected unresolved negatives by enumerating, per positive count p, every
// assignment of the p positives' k-sets (the negative clone is integrated
// out through C(|union|, k)).
Rational unresolved_negatives_brute(long n, const Rational& c, DesignShape shape);

// Expected unresolved positives by enumerating every assignment of all n
// clones' k-sets and classifying clone 0 with positives {0..p-1}.
// Cost (C(v,k))^n: keep n and v tiny.
Rational unresolved_positives_brute(long n, const Rational& c, DesignShape shape);

// Exact posterior inclusion probabilities by direct 2^n enumeration with
// from-scratch likelihood evaluation per subset.
std::vector<double> posterior_brute(const PoolingDesign& design,
                                    const AssayOutcome& outcome,
                                    const ErrorModel& errors, double prior_t);

}  // namespace poolkit::oracle

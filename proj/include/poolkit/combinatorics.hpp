#pragma once

#include <vector>

#include "poolkit/numeric.hpp"

namespace poolkit {

// v pools, each clone in k of them.
struct DesignShape {
  int v = 1;
  int k = 1;
  DesignShape(int v_, int k_) : v(v_), k(k_) {
    if (v < 1 || k < 1 || k > v)
      throw std::invalid_argument("DesignShape: need 1 <= k <= v");
  }
};

enum class EvalMethod { recursive, inclusion_exclusion };
enum class ConvertDirection { K_from_L, L_from_K };

// C(a, b); 0 outside 0 <= b <= a.
BigInt binom_big(long a, long b);
Rational binom_exact(long a, long b);
double binom_double(long a, long b);

// B(a, b, t) = C(a,b) t^b (1-t)^(a-b); rejects t outside [0,1].
Real binom_pmf(long a, long b, const Real& t);

// z_i = C(v-i, k) / C(v, k): one clone's k-set avoids i specified pools.
Rational zed(int i, DesignShape shape);
Real zed_real(int i, DesignShape shape);

// K^(p)_j: j specified pools each contain >= 1 of p positive clones.
// The recursive route is subtraction-free but is defined for j <= k only;
// inclusion-exclusion accepts any j <= v.
Rational coverage_prob_K(int p, int j, DesignShape shape, EvalMethod method);
Real coverage_prob_K_real(int p, int j, DesignShape shape, EvalMethod method);

// L^(p)_j: j specified pools are precisely the negative pools.
Rational negative_pools_prob_L(int p, int j, DesignShape shape, EvalMethod method);
Real negative_pools_prob_L_real(int p, int j, DesignShape shape, EvalMethod method);

// Derive one family from the other; must equal the direct computation.
Rational convert_K_L(ConvertDirection dir, int p, int j, DesignShape shape);
Real convert_K_L_real(ConvertDirection dir, int p, int j, DesignShape shape);

// K^(p)_j for p = 0..p_max at fixed j, built by stepping the recursion once
// per added positive clone.  Cheap way to drive sums over p.
std::vector<Real> coverage_K_column(int p_max, int j, DesignShape shape);
std::vector<Rational> coverage_K_column_exact(int p_max, int j, DesignShape shape);

}  // namespace poolkit

#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <stdexcept>
#include <string>

namespace poolkit {

// Unbounded integers / rationals (GMP) and arbitrary-precision reals (MPFR).
// Rational is always stored canonicalized: denominator > 0, lowest terms.
using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
using Real = boost::multiprecision::mpfr_float;

inline constexpr unsigned kDefaultPrecisionDigits = 50;

// Scoped working precision (decimal digits) for Real values created while
// the guard is alive.  Restores the previous precision on exit.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned digits) : prev_(Real::default_precision()) {
    Real::default_precision(std::max(digits, 10u));
  }
  ~PrecisionGuard() { Real::default_precision(prev_); }
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned prev_;
};

// Two independent evaluation routes disagreed beyond tolerance.
struct PrecisionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Constraint-respecting generation ran out of retries.
struct GenerationExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// No parameter choice in the search range can meet the target.
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Requested computation exceeds the declared summand budget.
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// pow with a nonnegative integer exponent, valid for any number type.
template <class Num>
Num ipow(Num base, unsigned long e) {
  Num r(1);
  while (e != 0) {
    if (e & 1UL) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

// Real-valued power specialization: route through MPFR's integer pow.
inline Real ipow(const Real& base, unsigned long e) {
  return boost::multiprecision::pow(base, e);
}

}  // namespace poolkit

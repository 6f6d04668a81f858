#include "poolkit/metrics.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace poolkit {

namespace {

// Walk p = 0, 1, ... feeding B(n, p, t) until the remaining binomial tail
// mass is below `tail`; fn(p, pmf) returns nothing.  The pmf is updated by
// the ratio recurrence, so the walk is O(p_cut).
template <class F>
void for_each_binomial_term(long n, const Real& t, double tail, F&& fn) {
  if (t == 0) {
    fn(0L, Real(1));
    return;
  }
  if (t == 1) {
    fn(n, Real(1));
    return;
  }
  Real pmf = ipow(Real(1 - t), static_cast<unsigned long>(n));
  Real cum(0);
  const Real odds = t / (1 - t);
  for (long p = 0; p <= n; ++p) {
    if (p > 0) pmf *= odds * Real(n - p + 1) / Real(p);
    fn(p, pmf);
    cum += pmf;
    if (cum > 1 - tail) break;
  }
}

Real zed_i(int i, DesignShape s) { return zed_real(i, s); }

// Inclusion-exclusion form of K^(p)_k from precomputed z powers.
Real K_ie_from_zpow(const std::vector<Real>& zp, DesignShape s) {
  Real sum(0);
  for (int i = 0; i <= s.k; ++i) {
    const Real term = Real(binom_big(s.k, i)) * zp[static_cast<std::size_t>(i)];
    sum += (i % 2 == 0) ? term : -term;
  }
  return sum;
}

std::vector<Real> K_row_step(const std::vector<Real>& prev, DesignShape s,
                             const Real& inv_cvk) {
  const int jmax = static_cast<int>(prev.size()) - 1;
  std::vector<Real> next(prev.size());
  for (int j = 0; j <= jmax; ++j) {
    Real sum(0);
    for (int i = 0; i <= j; ++i) {
      const BigInt ways = binom_big(j, i) * binom_big(s.v - j, s.k - i);
      if (ways == 0) continue;
      sum += Real(ways) * prev[static_cast<std::size_t>(j - i)];
    }
    next[static_cast<std::size_t>(j)] = sum * inv_cvk;
  }
  return next;
}

}  // namespace

Real unresolved_negatives_exact(const LibraryModel& model, DesignShape shape,
                                const MetricsOptions& opts) {
  PrecisionGuard guard(opts.digits);
  const long n = model.n;
  const Real t = Real(model.c) / n;

  std::vector<Real> z(static_cast<std::size_t>(shape.k) + 1);
  for (int i = 0; i <= shape.k; ++i) z[static_cast<std::size_t>(i)] = zed_i(i, shape);
  std::vector<Real> zp(z.size(), Real(1));  // z_i^p, updated per p

  // K^(p)_k via the subtraction-free recursion, cross-checked each step
  // against the inclusion-exclusion form.
  std::vector<Real> krow(static_cast<std::size_t>(shape.k) + 1, Real(0));
  krow[0] = Real(1);
  const Real inv_cvk = Real(1) / Real(binom_big(shape.v, shape.k));

  Real total(0);
  long cur_p = 0;  // krow and zp currently hold the p = 0 state
  for_each_binomial_term(n, t, opts.p_tail, [&](long p, const Real& pmf) {
    while (cur_p < p) {
      krow = K_row_step(krow, shape, inv_cvk);
      for (std::size_t i = 0; i < z.size(); ++i) zp[i] *= z[i];
      ++cur_p;
    }
    if (p == 0) return;  // K^(0)_k = 0 for k >= 1: no unresolved negatives
    const Real k_rec = krow[static_cast<std::size_t>(shape.k)];
    if (opts.convergence_check) {
      const Real k_ie = K_ie_from_zpow(zp, shape);
      const Real diff = abs(k_rec - k_ie);
      if (diff > 1e-8 * std::max(Real(1e-30), Real(abs(k_rec))))
        throw PrecisionError(
            "unresolved_negatives_exact: recursion and inclusion-exclusion "
            "disagree; raise --precision-digits");
    }
    total += Real(n - p) * pmf * k_rec;
  });
  return total;
}

Real unresolved_negatives_asymptotic(const LibraryModel& model, DesignShape shape,
                                     const MetricsOptions& opts) {
  PrecisionGuard guard(opts.digits);
  const Real c(model.c);
  Real sum(0);
  for (int i = 0; i <= shape.k; ++i) {
    const Real term = Real(binom_big(shape.k, i)) * exp(-c * (1 - zed_i(i, shape)));
    sum += (i % 2 == 0) ? term : -term;
  }
  return (Real(model.n) - c) * sum;
}

Real unresolved_negatives_independent_pools(const LibraryModel& model,
                                            DesignShape shape,
                                            const MetricsOptions& opts) {
  PrecisionGuard guard(opts.digits);
  const long n = model.n;
  const Real t = Real(model.c) / n;
  const Real q = Real(1) - Real(shape.k) / shape.v;
  Real total(0);
  for_each_binomial_term(n, t, opts.p_tail, [&](long p, const Real& pmf) {
    if (p == 0) return;
    const Real pool_hit = Real(1) - ipow(q, static_cast<unsigned long>(p));
    total += Real(n - p) * pmf * ipow(pool_hit, static_cast<unsigned long>(shape.k));
  });
  return total;
}

double exact_positives_summands(DesignShape shape) {
  double count = 0;
  for (int x = shape.k; x <= shape.v; ++x)
    for (int y = x; y <= std::min(x + shape.k, shape.v); ++y)
      count += static_cast<double>(x - shape.k + 1) * (y - x + 1);
  return count;
}

namespace {

// The assembled unresolved-positives formula: the duplicate-k-set term for a
// single positive plus the conditioned sum over (x, y) = (pools positive
// without the selected clone, pools positive).  The sums over the number of
// positives and of unresolved negatives are already folded in analytically,
// which is what makes the alternating structure precision-hungry.
template <class Num>
Num positives_exact_core(long n, const Num& t, const Num& c, DesignShape s) {
  const int v = s.v;
  const int k = s.k;
  const Num cvk(binom_big(v, k));
  const Num one(1);
  const Num tc = one - t;

  std::vector<Num> z(static_cast<std::size_t>(v) + 1);
  for (int i = 0; i <= v; ++i)
    z[static_cast<std::size_t>(i)] = Num(binom_big(v - i, k)) / cvk;

  // alpha^(1): another clone occupies exactly the same k pools.
  const Num dup = Num(one - one / cvk);
  Num total = c * ipow(tc, static_cast<unsigned long>(n - 1)) *
              Num(one - ipow(dup, static_cast<unsigned long>(n - 1)));

  std::vector<Num> pw0(static_cast<std::size_t>(k) + 1);
  std::vector<std::vector<Num>> R;
  for (int y = k; y <= v; ++y) {
    const Num beta = Num(binom_big(y, k)) / cvk;
    const int jmax = std::min(k, y - std::max(k, y - k));
    std::vector<Num> w(static_cast<std::size_t>(jmax) + 1);
    for (int j = 0; j <= jmax; ++j) {
      const Num xi = Num(binom_big(y - j, k)) / Num(binom_big(y, k));
      w[static_cast<std::size_t>(j)] = Num(one - beta * (one - xi));
      const Num base = Num(tc * w[static_cast<std::size_t>(j)]);
      pw0[static_cast<std::size_t>(j)] = ipow(base, static_cast<unsigned long>(n - 1));
    }
    // R[i][j] = (z_i t + (1-t) w_j)^(n-1) - ((1-t) w_j)^(n-1); the second
    // term removes the single-positive case counted by alpha^(1).
    const int ilo = std::max(0, v - y);
    R.assign(static_cast<std::size_t>(v - k - ilo) + 1,
             std::vector<Num>(static_cast<std::size_t>(jmax) + 1));
    for (int i = ilo; i <= v - k; ++i)
      for (int j = 0; j <= jmax; ++j) {
        const Num base = Num(z[static_cast<std::size_t>(i)] * t +
                             tc * w[static_cast<std::size_t>(j)]);
        R[static_cast<std::size_t>(i - ilo)][static_cast<std::size_t>(j)] =
            Num(ipow(base, static_cast<unsigned long>(n - 1)) -
                pw0[static_cast<std::size_t>(j)]);
      }

    for (int x = std::max(k, y - k); x <= y; ++x) {
      const BigInt outer3 =
          binom_big(v, x) * binom_big(x, y - k) * binom_big(v - x, y - x);
      if (outer3 == 0) continue;
      Num q(0);
      for (int i = v - x; i <= v - k; ++i) {
        Num inner(0);
        for (int j = 0; j <= y - x; ++j) {
          const Num term =
              Num(binom_big(y - x, j)) *
              R[static_cast<std::size_t>(i - ilo)][static_cast<std::size_t>(j)];
          inner += (j % 2 == 0) ? term : -term;
        }
        const Num term = Num(binom_big(x, v - i)) * inner;
        q += ((i - v + x) % 2 == 0) ? term : -term;
      }
      total += c * Num(outer3) / cvk * q;
    }
  }
  return total;
}

}  // namespace

Real unresolved_positives_exact(const LibraryModel& model, DesignShape shape,
                                const MetricsOptions& opts) {
  const double cost = exact_positives_summands(shape);
  if (cost > opts.summand_budget) {
    std::ostringstream msg;
    msg << "unresolved_positives_exact: " << cost
        << " summands exceed budget; use the approximate formula";
    throw BudgetExceeded(msg.str());
  }
  // The alternating sums cancel ~0.3*v digits; size the working precision
  // accordingly and verify by re-evaluating with twice the digits.
  const unsigned base =
      std::max(opts.digits, 40u + static_cast<unsigned>(shape.v) / 2u);
  Real first;
  {
    PrecisionGuard guard(base);
    const Real t = Real(model.c) / model.n;
    first = positives_exact_core<Real>(model.n, t, Real(model.c), shape);
  }
  if (!opts.convergence_check) return first;
  Real second;
  {
    PrecisionGuard guard(2 * base);
    const Real t = Real(model.c) / model.n;
    second = positives_exact_core<Real>(model.n, t, Real(model.c), shape);
  }
  PrecisionGuard guard(2 * base);
  const Real diff = abs(first - second);
  if (diff > 1e-6 * std::max(Real(1e-12), Real(abs(second))))
    throw PrecisionError(
        "unresolved_positives_exact: doubled-precision re-evaluation "
        "disagrees; raise --precision-digits");
  return second;
}

namespace {

// C(a, k) / C(b, k) for real-valued a (and b), as the falling-factorial
// ratio, clamped into [0, 1].
Real falling_ratio(const Real& a, const Real& b, int k) {
  if (a < k) return Real(0);
  Real r(1);
  for (int m = 0; m < k; ++m) r *= (a - m) / (b - m);
  if (r < 0) return Real(0);
  if (r > 1) return Real(1);
  return r;
}

}  // namespace

Real unresolved_positives_approx(const LibraryModel& model, DesignShape shape,
                                 PositiveApprox variant,
                                 const MetricsOptions& opts) {
  PrecisionGuard guard(opts.digits);
  const long n = model.n;
  const int k = shape.k;
  const Real t = Real(model.c) / n;
  const Real q = Real(1) - Real(k) / shape.v;  // one pool avoided by one clone

  std::vector<Real> z(static_cast<std::size_t>(k) + 1);
  for (int i = 0; i <= k; ++i) z[static_cast<std::size_t>(i)] = zed_i(i, shape);

  Real total(0);
  for_each_binomial_term(n, t, opts.p_tail, [&](long p, const Real& pmf) {
    if (p == 0) return;
    const Real qp1 = ipow(q, static_cast<unsigned long>(p - 1));
    const Real omega = Real(shape.v) * (1 - qp1 * q);
    const Real mu = falling_ratio(omega, Real(shape.v), k);
    Real term(0);
    if (variant == PositiveApprox::independent_pools) {
      const Real base = Real(1) - qp1 * exp(-mu * Real(n - p) * k / omega);
      term = ipow(base, static_cast<unsigned long>(k));
    } else {
      for (int i = 0; i <= k; ++i) {
        const Real zeta = falling_ratio(omega - i, omega, k);
        const Real piece = Real(binom_big(k, i)) *
                           ((p - 1 == 0) ? Real(1)
                                         : ipow(z[static_cast<std::size_t>(i)],
                                                static_cast<unsigned long>(p - 1))) *
                           exp(-mu * Real(n - p) * (1 - zeta));
        term += (i % 2 == 0) ? piece : -piece;
      }
    }
    total += Real(p) * pmf * term;
  });
  return total;
}

Rational unresolved_negatives_exact_rational(long n, const Rational& c,
                                             DesignShape shape) {
  const Rational t = c / n;
  const Rational tc = Rational(1) - t;
  Rational total(0);
  for (long p = 0; p <= n; ++p) {
    if (p == 0) continue;
    const Rational pmf = Rational(binom_big(n, p)) *
                         ipow(t, static_cast<unsigned long>(p)) *
                         ipow(tc, static_cast<unsigned long>(n - p));
    Rational inner(0);
    for (int i = 0; i <= shape.k; ++i) {
      const Rational term =
          Rational(binom_big(shape.k, i)) *
          ipow(zed(i, shape), static_cast<unsigned long>(p));
      inner += (i % 2 == 0) ? term : -term;
    }
    total += Rational(n - p) * pmf * inner;
  }
  return total;
}

Rational unresolved_positives_exact_rational(long n, const Rational& c,
                                             DesignShape shape) {
  const Rational t = c / n;
  return positives_exact_core<Rational>(n, t, c, shape);
}

MetricsResult evaluate_random_ksets(const LibraryModel& model, DesignShape shape,
                                    MetricsMethod method,
                                    const MetricsOptions& opts) {
  PrecisionGuard guard(opts.digits);
  MetricsResult r;
  r.digits = opts.digits;
  switch (method) {
    case MetricsMethod::exact:
      r.n_bar = unresolved_negatives_exact(model, shape, opts);
      r.p_bar = unresolved_positives_exact(model, shape, opts);
      r.method = "exact";
      break;
    case MetricsMethod::asymptotic:
      r.n_bar = unresolved_negatives_asymptotic(model, shape, opts);
      r.p_bar = unresolved_positives_approx(model, shape,
                                            PositiveApprox::correlated, opts);
      r.method = "asymptotic";
      break;
    case MetricsMethod::independent_pools:
      r.n_bar = unresolved_negatives_independent_pools(model, shape, opts);
      r.p_bar = unresolved_positives_approx(
          model, shape, PositiveApprox::independent_pools, opts);
      r.method = "independent_pools";
      break;
  }
  const Real c(model.c);
  r.resolved_negatives = Real(model.n) - c - r.n_bar;
  r.resolved_positives = c - r.p_bar;
  r.confirmatory_load = c + r.n_bar;
  return r;
}

}  // namespace poolkit

#include "poolkit/combinatorics.hpp"

#include <cmath>

namespace poolkit {

BigInt binom_big(long a, long b) {
  if (a < 0 || b < 0 || b > a) return BigInt(0);
  BigInt r;
  mpz_bin_uiui(r.backend().data(), static_cast<unsigned long>(a),
               static_cast<unsigned long>(b));
  return r;
}

Rational binom_exact(long a, long b) { return Rational(binom_big(a, b)); }

double binom_double(long a, long b) {
  if (a < 0 || b < 0 || b > a) return 0.0;
  if (b > a - b) b = a - b;
  double r = 1.0;
  for (long j = 1; j <= b; ++j)
    r *= static_cast<double>(a - b + j) / static_cast<double>(j);
  return r;
}

Real binom_pmf(long a, long b, const Real& t) {
  if (t < 0 || t > 1) throw std::domain_error("binom_pmf: t outside [0,1]");
  if (b < 0 || b > a) return Real(0);
  // 0^0 = 1 conventions at the endpoints.
  Real tb = (b == 0) ? Real(1) : ipow(t, static_cast<unsigned long>(b));
  Real qb = (a == b) ? Real(1) : ipow(Real(1 - t), static_cast<unsigned long>(a - b));
  return Real(binom_big(a, b)) * tb * qb;
}

namespace {

template <class Num>
Num zed_impl(int i, DesignShape s) {
  if (i < 0 || i > s.v) throw std::domain_error("zed: need 0 <= i <= v");
  return Num(binom_big(s.v - i, s.k)) / Num(binom_big(s.v, s.k));
}

// p-th power with the z_i^0 = 1 convention used throughout.
template <class Num>
Num zpow(const Num& z, int p) {
  return (p == 0) ? Num(1) : ipow(z, static_cast<unsigned long>(p));
}

template <class Num>
Num K_inclusion_exclusion(int p, int j, DesignShape s) {
  Num sum(0);
  for (int i = 0; i <= j; ++i) {
    const Num term = Num(binom_big(j, i)) * zpow(zed_impl<Num>(i, s), p);
    sum += (i % 2 == 0) ? term : -term;
  }
  return sum;
}

template <class Num>
Num L_inclusion_exclusion(int p, int j, DesignShape s) {
  // Sum over supersets of the j specified pools being avoided; z_i^0 = 1
  // extends the sum to i = v so the p = 0 base case falls out as well.
  Num sum(0);
  for (int i = j; i <= s.v; ++i) {
    const Num term = Num(binom_big(s.v - j, i - j)) * zpow(zed_impl<Num>(i, s), p);
    sum += ((i - j) % 2 == 0) ? term : -term;
  }
  return sum;
}

// One recursion step: add one positive clone to the row K^(p-1)_0..jmax.
template <class Num>
std::vector<Num> K_step(const std::vector<Num>& prev, DesignShape s,
                        const Num& inv_cvk) {
  const int jmax = static_cast<int>(prev.size()) - 1;
  std::vector<Num> next(prev.size());
  for (int j = 0; j <= jmax; ++j) {
    Num sum(0);
    for (int i = 0; i <= j; ++i) {
      const BigInt ways = binom_big(j, i) * binom_big(s.v - j, s.k - i);
      if (ways == 0) continue;
      sum += Num(ways) * prev[static_cast<std::size_t>(j - i)];
    }
    next[static_cast<std::size_t>(j)] = sum * inv_cvk;
  }
  return next;
}

template <class Num>
Num K_recursive(int p, int j, DesignShape s) {
  if (j > s.k)
    throw std::domain_error("coverage_prob_K: recursive method needs j <= k");
  std::vector<Num> row(static_cast<std::size_t>(j) + 1, Num(0));
  row[0] = Num(1);  // K^(0)_j = [j == 0]
  const Num inv_cvk = Num(1) / Num(binom_big(s.v, s.k));
  for (int step = 0; step < p; ++step) row = K_step(row, s, inv_cvk);
  return row[static_cast<std::size_t>(j)];
}

// The printed recursion for L carries the coefficient C(i, j), which fails
// against direct enumeration; the combinatorially forced choice is
// C(v-j, i-j): the i-j pools the new clone must switch off are chosen among
// the v-j non-specified ones.  Validated exactly in the test suite.
template <class Num>
Num L_recursive(int p, int j, DesignShape s) {
  std::vector<Num> row(static_cast<std::size_t>(s.v) + 1, Num(0));
  row[static_cast<std::size_t>(s.v)] = Num(1);  // L^(0)_i = [i == v]
  const Num inv_cvk = Num(1) / Num(binom_big(s.v, s.k));
  for (int step = 0; step < p; ++step) {
    std::vector<Num> next(row.size(), Num(0));
    for (int jj = 0; jj <= s.v; ++jj) {
      Num sum(0);
      for (int i = jj; i <= std::min(jj + s.k, s.v); ++i) {
        const BigInt ways =
            binom_big(s.v - jj, i - jj) * binom_big(s.v - i, s.k - i + jj);
        if (ways == 0) continue;
        sum += Num(ways) * row[static_cast<std::size_t>(i)];
      }
      next[static_cast<std::size_t>(jj)] = sum * inv_cvk;
    }
    row = next;
  }
  return row[static_cast<std::size_t>(j)];
}

template <class Num>
Num K_impl(int p, int j, DesignShape s, EvalMethod m) {
  if (p < 0 || j < 0 || j > s.v)
    throw std::domain_error("coverage_prob_K: need p >= 0, 0 <= j <= v");
  return m == EvalMethod::recursive ? K_recursive<Num>(p, j, s)
                                    : K_inclusion_exclusion<Num>(p, j, s);
}

template <class Num>
Num L_impl(int p, int j, DesignShape s, EvalMethod m) {
  if (p < 0 || j < 0 || j > s.v)
    throw std::domain_error("negative_pools_prob_L: need p >= 0, 0 <= j <= v");
  return m == EvalMethod::recursive ? L_recursive<Num>(p, j, s)
                                    : L_inclusion_exclusion<Num>(p, j, s);
}

// K_j = sum_i C(v-j, i) L_i: the negative-pool set is any subset of the
// pools outside the j specified ones.  (The printed identity's C(v-i, i)
// coefficient does not survive enumeration either; see tests.)
template <class Num>
Num K_from_L(int p, int j, DesignShape s) {
  Num sum(0);
  for (int i = 0; i <= s.v - j; ++i)
    sum += Num(binom_big(s.v - j, i)) * L_inclusion_exclusion<Num>(p, i, s);
  return sum;
}

template <class Num>
Num L_from_K(int p, int j, DesignShape s) {
  Num sum(0);
  for (int i = s.v - j; i <= s.v; ++i) {
    const Num term =
        Num(binom_big(j, i - (s.v - j))) * K_inclusion_exclusion<Num>(p, i, s);
    sum += ((i - (s.v - j)) % 2 == 0) ? term : -term;
  }
  return sum;
}

template <class Num>
Num convert_impl(ConvertDirection dir, int p, int j, DesignShape s) {
  if (p < 0 || j < 0 || j > s.v)
    throw std::domain_error("convert_K_L: need p >= 0, 0 <= j <= v");
  return dir == ConvertDirection::K_from_L ? K_from_L<Num>(p, j, s)
                                           : L_from_K<Num>(p, j, s);
}

template <class Num>
std::vector<Num> K_column(int p_max, int j, DesignShape s) {
  std::vector<Num> col;
  col.reserve(static_cast<std::size_t>(p_max) + 1);
  std::vector<Num> row(static_cast<std::size_t>(j) + 1, Num(0));
  row[0] = Num(1);
  const Num inv_cvk = Num(1) / Num(binom_big(s.v, s.k));
  col.push_back(row[static_cast<std::size_t>(j)]);
  for (int p = 1; p <= p_max; ++p) {
    row = K_step(row, s, inv_cvk);
    col.push_back(row[static_cast<std::size_t>(j)]);
  }
  return col;
}

}  // namespace

Rational zed(int i, DesignShape shape) { return zed_impl<Rational>(i, shape); }
Real zed_real(int i, DesignShape shape) { return zed_impl<Real>(i, shape); }

Rational coverage_prob_K(int p, int j, DesignShape s, EvalMethod m) {
  return K_impl<Rational>(p, j, s, m);
}
Real coverage_prob_K_real(int p, int j, DesignShape s, EvalMethod m) {
  return K_impl<Real>(p, j, s, m);
}

Rational negative_pools_prob_L(int p, int j, DesignShape s, EvalMethod m) {
  return L_impl<Rational>(p, j, s, m);
}
Real negative_pools_prob_L_real(int p, int j, DesignShape s, EvalMethod m) {
  return L_impl<Real>(p, j, s, m);
}

Rational convert_K_L(ConvertDirection dir, int p, int j, DesignShape s) {
  return convert_impl<Rational>(dir, p, j, s);
}
Real convert_K_L_real(ConvertDirection dir, int p, int j, DesignShape s) {
  return convert_impl<Real>(dir, p, j, s);
}

std::vector<Real> coverage_K_column(int p_max, int j, DesignShape s) {
  if (j > s.k)
    throw std::domain_error("coverage_K_column: recursion needs j <= k");
  return K_column<Real>(p_max, j, s);
}
std::vector<Rational> coverage_K_column_exact(int p_max, int j, DesignShape s) {
  if (j > s.k)
    throw std::domain_error("coverage_K_column_exact: recursion needs j <= k");
  return K_column<Rational>(p_max, j, s);
}

}  // namespace poolkit

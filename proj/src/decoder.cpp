#include "poolkit/decoder.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <ostream>

namespace poolkit {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// count * logval with the 0 * log(0) = 0 convention.
double count_term(long count, double logval) {
  return count == 0 ? 0.0 : static_cast<double>(count) * logval;
}

double assembled_log_likelihood(long v_total, long upsilon, long v_fp, long v_fn,
                                const ErrorModel& e) {
  const double lfp = std::log(e.fp);
  const double lfp1 = std::log1p(-e.fp);
  const double lfn = std::log(e.fn);
  const double lfn1 = std::log1p(-e.fn);
  return count_term(v_fp, lfp) + count_term(v_total - upsilon - v_fp, lfp1) +
         count_term(v_fn, lfn) + count_term(upsilon - v_fn, lfn1);
}

// Streaming log-sum-exp.
struct LogSum {
  double mx = kNegInf;
  double s = 0.0;
  void add(double lw) {
    if (lw == kNegInf) return;
    if (mx == kNegInf) {
      mx = lw;
      s = 1.0;
    } else if (lw <= mx) {
      s += std::exp(lw - mx);
    } else {
      s = s * std::exp(mx - lw) + 1.0;
      mx = lw;
    }
  }
  double value() const { return mx == kNegInf ? kNegInf : mx + std::log(s); }
};

void finalize_ranking(PosteriorRanking& r) {
  const int n = static_cast<int>(r.by_clone.size());
  r.order.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) r.order[static_cast<std::size_t>(i)] = i;
  std::sort(r.order.begin(), r.order.end(), [&](int a, int b) {
    const double pa = r.by_clone[static_cast<std::size_t>(a)].posterior;
    const double pb = r.by_clone[static_cast<std::size_t>(b)].posterior;
    if (pa != pb) return pa > pb;
    return a < b;
  });
  for (int pos = 0; pos < n; ++pos)
    r.by_clone[static_cast<std::size_t>(r.order[static_cast<std::size_t>(pos)])].rank =
        pos + 1;
}

}  // namespace

PositiveSetHypothesis make_hypothesis(const PoolingDesign& design,
                                      std::vector<int> clones) {
  std::sort(clones.begin(), clones.end());
  clones.erase(std::unique(clones.begin(), clones.end()), clones.end());
  PositiveSetHypothesis hyp;
  for (int i : clones) {
    if (i < 0 || i >= design.n)
      throw std::invalid_argument("make_hypothesis: clone index out of range");
    hyp.covered_pools.insert(hyp.covered_pools.end(),
                             design.assignment[static_cast<std::size_t>(i)].begin(),
                             design.assignment[static_cast<std::size_t>(i)].end());
  }
  hyp.clones = std::move(clones);
  std::sort(hyp.covered_pools.begin(), hyp.covered_pools.end());
  hyp.covered_pools.erase(
      std::unique(hyp.covered_pools.begin(), hyp.covered_pools.end()),
      hyp.covered_pools.end());
  return hyp;
}

double log_likelihood(const AssayOutcome& outcome,
                      const PositiveSetHypothesis& hypothesis,
                      const ErrorModel& errors, int v) {
  check_error_model(errors);
  if (static_cast<int>(outcome.pools.size()) != v)
    throw std::invalid_argument("log_likelihood: assay length != v");
  long v_fn = 0;  // observed-negative pools inside upsilon
  for (int pool : hypothesis.covered_pools)
    if (!outcome.pools[static_cast<std::size_t>(pool)]) ++v_fn;
  long observed_positive = 0;
  for (auto b : outcome.pools) observed_positive += b;
  const long upsilon = static_cast<long>(hypothesis.covered_pools.size());
  const long v_fp = observed_positive - (upsilon - v_fn);
  return assembled_log_likelihood(v, upsilon, v_fp, v_fn, errors);
}

PosteriorRanking posterior_exact(const PoolingDesign& design,
                                 const AssayOutcome& outcome,
                                 const ErrorModel& errors,
                                 const LibraryModel& model) {
  check_error_model(errors);
  const int n = design.n;
  if (n > 20)
    throw std::invalid_argument(
        "posterior_exact: 2^n enumeration - use posterior_gibbs for n > 20");
  if (static_cast<int>(outcome.pools.size()) != design.v)
    throw std::invalid_argument("posterior_exact: assay length != v");

  const double t = model.c / static_cast<double>(model.n);
  const double log_t = std::log(t);
  const double log_q = std::log1p(-t);

  long observed_positive = 0;
  for (auto b : outcome.pools) observed_positive += b;

  std::vector<int> cnt(static_cast<std::size_t>(design.v), 0);
  long upsilon = 0, v_fn = 0, popcount = 0;
  // empty set: all pools uncovered
  LogSum total;
  std::vector<LogSum> per_clone(static_cast<std::size_t>(n));

  auto current_logweight = [&]() {
    const long v_fp = observed_positive - (upsilon - v_fn);
    return assembled_log_likelihood(design.v, upsilon, v_fp, v_fn, errors) +
           static_cast<double>(popcount) * log_t +
           static_cast<double>(n - popcount) * log_q;
  };

  std::uint32_t mask = 0;
  double lw = current_logweight();
  total.add(lw);
  const std::uint64_t subsets = 1ULL << n;
  for (std::uint64_t i = 1; i < subsets; ++i) {
    const int bit = std::countr_zero(i);
    const bool adding = !(mask >> bit & 1U);
    mask ^= 1U << bit;
    popcount += adding ? 1 : -1;
    for (int pool : design.assignment[static_cast<std::size_t>(bit)]) {
      int& c = cnt[static_cast<std::size_t>(pool)];
      if (adding) {
        if (c++ == 0) {
          ++upsilon;
          if (!outcome.pools[static_cast<std::size_t>(pool)]) ++v_fn;
        }
      } else {
        if (--c == 0) {
          --upsilon;
          if (!outcome.pools[static_cast<std::size_t>(pool)]) --v_fn;
        }
      }
    }
    lw = current_logweight();
    total.add(lw);
    for (int b = 0; b < n; ++b)
      if (mask >> b & 1U) per_clone[static_cast<std::size_t>(b)].add(lw);
  }

  const double log_total = total.value();
  if (log_total == kNegInf)
    throw std::domain_error(
        "posterior_exact: observed assay impossible under this error model");

  PosteriorRanking r;
  r.by_clone.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& e = r.by_clone[static_cast<std::size_t>(i)];
    e.clone = i;
    const double lv = per_clone[static_cast<std::size_t>(i)].value();
    e.posterior = lv == kNegInf ? 0.0 : std::exp(lv - log_total);
    e.se = 0.0;
  }
  finalize_ranking(r);
  return r;
}

PosteriorRanking posterior_gibbs(const PoolingDesign& design,
                                 const AssayOutcome& outcome,
                                 const ErrorModel& errors,
                                 const LibraryModel& model, long sweeps,
                                 long burn_in, int chains, RngSeed seed) {
  check_error_model(errors);
  if (sweeps <= burn_in)
    throw std::invalid_argument("posterior_gibbs: need sweeps > burn_in");
  if (chains < 1) throw std::invalid_argument("posterior_gibbs: chains >= 1");
  if (static_cast<int>(outcome.pools.size()) != design.v)
    throw std::invalid_argument("posterior_gibbs: assay length != v");

  // Keep the chain irreducible at boundary rates.
  const double fp = std::clamp(errors.fp, 1e-12, 1.0 - 1e-12);
  const double fn = std::clamp(errors.fn, 1e-12, 1.0 - 1e-12);
  const int n = design.n;
  const double t = model.c / static_cast<double>(model.n);
  const double prior_lo = std::log(t) - std::log1p(-t);
  // Log-likelihood gain when a pool goes from uncovered to covered.
  const double gain_pos = std::log1p(-fn) - std::log(fp);   // V = 1
  const double gain_neg = std::log(fn) - std::log1p(-fp);   // V = 0

  const long samples = sweeps - burn_in;
  std::vector<double> chain_marginal(static_cast<std::size_t>(n), 0.0);
  std::vector<double> mean(static_cast<std::size_t>(n), 0.0);
  std::vector<double> m2(static_cast<std::size_t>(n), 0.0);  // across chains
  std::vector<double> lo_min(static_cast<std::size_t>(n), 1.0);
  std::vector<double> lo_max(static_cast<std::size_t>(n), 0.0);

  std::vector<std::uint8_t> inc(static_cast<std::size_t>(n));
  std::vector<int> cnt(static_cast<std::size_t>(design.v));
  std::vector<long> inc_count(static_cast<std::size_t>(n));

  for (int chain = 0; chain < chains; ++chain) {
    Rng rng(substream(seed, static_cast<std::uint64_t>(chain)));
    std::fill(cnt.begin(), cnt.end(), 0);
    std::fill(inc_count.begin(), inc_count.end(), 0L);
    for (int i = 0; i < n; ++i) {
      inc[static_cast<std::size_t>(i)] = rng.unit() < t ? 1 : 0;
      if (inc[static_cast<std::size_t>(i)])
        for (int pool : design.assignment[static_cast<std::size_t>(i)])
          ++cnt[static_cast<std::size_t>(pool)];
    }
    for (long sweep = 0; sweep < sweeps; ++sweep) {
      for (int i = 0; i < n; ++i) {
        double lo = prior_lo;
        const int self = inc[static_cast<std::size_t>(i)];
        for (int pool : design.assignment[static_cast<std::size_t>(i)]) {
          if (cnt[static_cast<std::size_t>(pool)] - self == 0)
            lo += outcome.pools[static_cast<std::size_t>(pool)] ? gain_pos
                                                                : gain_neg;
        }
        const double p1 = 1.0 / (1.0 + std::exp(-lo));
        const std::uint8_t next = rng.unit() < p1 ? 1 : 0;
        if (next != inc[static_cast<std::size_t>(i)]) {
          const int delta = next ? 1 : -1;
          for (int pool : design.assignment[static_cast<std::size_t>(i)])
            cnt[static_cast<std::size_t>(pool)] += delta;
          inc[static_cast<std::size_t>(i)] = next;
        }
      }
      if (sweep >= burn_in)
        for (int i = 0; i < n; ++i)
          inc_count[static_cast<std::size_t>(i)] += inc[static_cast<std::size_t>(i)];
    }
    for (int i = 0; i < n; ++i) {
      const double m = static_cast<double>(inc_count[static_cast<std::size_t>(i)]) /
                       static_cast<double>(samples);
      chain_marginal[static_cast<std::size_t>(i)] = m;
      mean[static_cast<std::size_t>(i)] += m;
      m2[static_cast<std::size_t>(i)] += m * m;
      lo_min[static_cast<std::size_t>(i)] =
          std::min(lo_min[static_cast<std::size_t>(i)], m);
      lo_max[static_cast<std::size_t>(i)] =
          std::max(lo_max[static_cast<std::size_t>(i)], m);
    }
  }

  PosteriorRanking r;
  r.sweeps = sweeps;
  r.burn_in = burn_in;
  r.chains = chains;
  r.by_clone.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& e = r.by_clone[static_cast<std::size_t>(i)];
    e.clone = i;
    const double m = mean[static_cast<std::size_t>(i)] / chains;
    e.posterior = m;
    if (chains >= 2) {
      const double var =
          std::max(0.0, m2[static_cast<std::size_t>(i)] / chains - m * m);
      e.se = std::sqrt(var / chains);
    } else {
      e.se = std::sqrt(std::max(0.0, m * (1 - m)) / static_cast<double>(samples));
    }
    if (chains >= 2)
      r.max_chain_spread =
          std::max(r.max_chain_spread, lo_max[static_cast<std::size_t>(i)] -
                                           lo_min[static_cast<std::size_t>(i)]);
  }
  r.mixed = r.max_chain_spread <= 0.2;
  finalize_ranking(r);
  return r;
}

PosteriorRanking posterior_subset_sampling(const PoolingDesign& design,
                                           const AssayOutcome& outcome,
                                           const ErrorModel& errors,
                                           const LibraryModel& model,
                                           long samples, RngSeed seed) {
  check_error_model(errors);
  if (static_cast<int>(outcome.pools.size()) != design.v)
    throw std::invalid_argument("posterior_subset_sampling: assay length != v");
  const int n = design.n;
  const double t = model.c / static_cast<double>(model.n);
  Rng rng(seed);

  long observed_positive = 0;
  for (auto b : outcome.pools) observed_positive += b;

  std::vector<int> cnt(static_cast<std::size_t>(design.v));
  std::vector<LogSum> with_clone(static_cast<std::size_t>(n));
  std::vector<LogSum> without_clone(static_cast<std::size_t>(n));

  for (long s = 0; s < samples; ++s) {
    std::fill(cnt.begin(), cnt.end(), 0);
    long upsilon = 0, v_fn = 0;
    std::vector<std::uint8_t> inc(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      inc[static_cast<std::size_t>(i)] = rng.unit() < t ? 1 : 0;
      if (!inc[static_cast<std::size_t>(i)]) continue;
      for (int pool : design.assignment[static_cast<std::size_t>(i)]) {
        if (cnt[static_cast<std::size_t>(pool)]++ == 0) {
          ++upsilon;
          if (!outcome.pools[static_cast<std::size_t>(pool)]) ++v_fn;
        }
      }
    }
    // Toggle each clone in and out of the sampled subset.
    for (int i = 0; i < n; ++i) {
      long du = 0, dfn = 0;
      const int self = inc[static_cast<std::size_t>(i)];
      for (int pool : design.assignment[static_cast<std::size_t>(i)]) {
        if (cnt[static_cast<std::size_t>(pool)] - self == 0) {
          ++du;
          if (!outcome.pools[static_cast<std::size_t>(pool)]) ++dfn;
        }
      }
      const long u_with = upsilon + (self ? 0 : du);
      const long fn_with = v_fn + (self ? 0 : dfn);
      const long u_without = upsilon - (self ? du : 0);
      const long fn_without = v_fn - (self ? dfn : 0);
      with_clone[static_cast<std::size_t>(i)].add(assembled_log_likelihood(
          design.v, u_with, observed_positive - (u_with - fn_with), fn_with,
          errors));
      without_clone[static_cast<std::size_t>(i)].add(assembled_log_likelihood(
          design.v, u_without, observed_positive - (u_without - fn_without),
          fn_without, errors));
    }
  }

  PosteriorRanking r;
  r.sweeps = samples;
  r.by_clone.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& e = r.by_clone[static_cast<std::size_t>(i)];
    e.clone = i;
    const double num = with_clone[static_cast<std::size_t>(i)].value();
    const double den = without_clone[static_cast<std::size_t>(i)].value();
    if (num == kNegInf && den == kNegInf) {
      e.posterior = t;  // no information
    } else {
      // Pr(V & I+) / Pr(V & I-) with the Bernoulli(t) prior folded in.
      const double log_ratio =
          (std::log(t) + num) - (std::log1p(-t) + den);
      e.posterior = 1.0 / (1.0 + std::exp(-log_ratio));
    }
  }
  finalize_ranking(r);
  return r;
}

std::vector<int> rank_for_confirmation(const PosteriorRanking& ranking, int budget) {
  if (budget < 0 || budget > static_cast<int>(ranking.order.size()))
    throw std::invalid_argument("rank_for_confirmation: bad budget");
  return std::vector<int>(ranking.order.begin(), ranking.order.begin() + budget);
}

void write_posterior_csv(std::ostream& out, const PosteriorRanking& r) {
  out << "clone_id,posterior,stderr,rank\n";
  for (const auto& e : r.by_clone)
    out << e.clone << ',' << e.posterior << ',' << e.se << ',' << e.rank << "\n";
}

}  // namespace poolkit

#include "poolkit/optimizer.hpp"

#include <cmath>
#include <limits>
#include <future>
#include <iostream>
#include <ostream>

namespace poolkit {

namespace {

double resolved_expectation(const LibraryModel& model, DesignShape shape,
                            OptMethod method, const MetricsOptions& opts) {
  Real p_bar = method == OptMethod::exact_eq_positives
                   ? unresolved_positives_exact(model, shape, opts)
                   : unresolved_positives_approx(
                         model, shape, PositiveApprox::correlated, opts);
  return static_cast<double>(Real(model.c) - p_bar);
}

}  // namespace

std::pair<int, double> optimal_k(const LibraryModel& model, int v,
                                 const OptimizationTarget& target) {
  int k_lo = 1, k_hi = std::min(v, 40);
  if (target.k_range) {
    if (target.k_range->first > target.k_range->second)
      throw std::invalid_argument("optimal_k: empty k range");
    k_lo = std::max(k_lo, target.k_range->first);
    k_hi = std::min(k_hi, target.k_range->second);
  }
  // v below every admissible k: no valid design at this pool count.
  if (k_lo > k_hi) return {k_lo, -std::numeric_limits<double>::infinity()};
  int best_k = k_lo;
  double best = -1;
  for (int k = k_lo; k <= k_hi; ++k) {
    const double r =
        resolved_expectation(model, DesignShape(v, k), target.method, target.metrics);
    if (r > best) {  // strict: ties keep the smaller k
      best = r;
      best_k = k;
    }
  }
  return {best_k, best};
}

OptimizationResult min_pools(const LibraryModel& model,
                             const OptimizationTarget& target) {
  const double goal = target.fraction * model.c;
  if (!(target.fraction > 0 && target.fraction < 1))
    throw std::invalid_argument("min_pools: need 0 < fraction < 1");

  int lo = std::max(1, target.v_range.first);
  int hi = target.v_range.second;
  if (lo > hi) throw std::invalid_argument("min_pools: empty v range");

  auto feasible = [&](int v) { return optimal_k(model, v, target).second >= goal; };

  if (!feasible(hi))
    throw InfeasibleError("min_pools: target unreachable within v range");

  // Bisection: assumes feasibility is monotone in v.
  int flo = lo, fhi = hi;
  if (feasible(lo)) {
    fhi = lo;
  } else {
    while (fhi - flo > 1) {
      const int mid = flo + (fhi - flo) / 2;
      (feasible(mid) ? fhi : flo) = mid;
    }
  }

  // The bisection invariant already certifies fhi; re-probe the neighbour
  // below and fall back to a linear scan if monotonicity fails there.
  if (fhi > lo && feasible(fhi - 1)) {
    std::clog << "min_pools: non-monotone feasibility near v=" << fhi
              << ", falling back to linear scan\n";
    for (int v = lo; v <= hi; ++v) {
      if (feasible(v)) {
        fhi = v;
        break;
      }
    }
  }

  const auto [k_opt, achieved] = optimal_k(model, fhi, target);
  OptimizationResult res;
  res.v_min = fhi;
  res.k_opt = k_opt;
  res.achieved = achieved;
  res.unresolved_negatives = static_cast<double>(unresolved_negatives_asymptotic(
      model, DesignShape(fhi, k_opt), target.metrics));
  res.clones_per_pool =
      static_cast<double>(model.n) * k_opt / static_cast<double>(fhi);
  return res;
}

std::vector<long> log_space_long(long lo, long hi, int steps) {
  std::vector<long> out;
  const auto d = log_space(static_cast<double>(lo), static_cast<double>(hi), steps);
  for (double x : d) out.push_back(std::lround(x));
  return out;
}

std::vector<double> log_space(double lo, double hi, int steps) {
  std::vector<double> out;
  if (steps <= 1) {
    out.push_back(lo);
    return out;
  }
  const double la = std::log(lo), lb = std::log(hi);
  for (int i = 0; i < steps; ++i)
    out.push_back(std::exp(la + (lb - la) * i / (steps - 1)));
  return out;
}

std::vector<SweepRow> sweep_grid(const std::vector<long>& n_values,
                                 const std::vector<double>& c_values,
                                 double fraction, OptMethod method, int threads) {
  std::vector<SweepRow> rows(n_values.size() * c_values.size());
  auto run_cell = [&](std::size_t idx) {
    const long n = n_values[idx / c_values.size()];
    const double c = c_values[idx % c_values.size()];
    OptimizationTarget target;
    target.fraction = fraction;
    target.method = method;
    LibraryModel model(n, c);
    const OptimizationResult r = min_pools(model, target);
    rows[idx] = SweepRow{n,        c,          fraction,  r.v_min,
                         r.k_opt,  r.achieved, r.unresolved_negatives};
  };
  if (threads <= 1) {
    for (std::size_t i = 0; i < rows.size(); ++i) run_cell(i);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::future<void>> workers;
  const int nw = std::min<std::size_t>(threads, rows.size());
  for (int w = 0; w < nw; ++w) {
    workers.push_back(std::async(std::launch::async, [&]() {
      // Each worker pins its own MPFR working precision.
      PrecisionGuard guard(kDefaultPrecisionDigits);
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= rows.size()) return;
        run_cell(i);
      }
    }));
  }
  for (auto& w : workers) w.get();
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "n,c,fraction,v_min,k_opt,resolved_exp,unresolved_neg_exp\n";
  for (const auto& r : rows) {
    out << r.n << ',' << r.c << ',' << r.fraction << ',' << r.v_min << ','
        << r.k_opt << ',' << r.resolved_exp << ',' << r.unresolved_neg_exp
        << "\n";
  }
}

}  // namespace poolkit

#include "poolkit/screening.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace poolkit {

void check_error_model(const ErrorModel& e) {
  if (e.fp < 0 || e.fp > 1 || e.fn < 0 || e.fn > 1)
    throw std::invalid_argument("ErrorModel: rates must lie in [0,1]");
}

std::vector<int> draw_positives(const LibraryModel& model, RngSeed seed) {
  Rng rng(seed);
  const double t = model.c / static_cast<double>(model.n);
  const long count = rng.binomial(model.n, t);
  std::vector<int> out = rng.ksubset(static_cast<int>(model.n), static_cast<int>(count));
  return out;
}

AssayOutcome assay_pools(const PoolingDesign& design,
                         const std::vector<int>& positives,
                         const ErrorModel& errors, RngSeed seed) {
  check_error_model(errors);
  for (int i : positives)
    if (i < 0 || i >= design.n)
      throw std::invalid_argument("assay_pools: positive index out of range");
  AssayOutcome out;
  out.pools.assign(static_cast<std::size_t>(design.v), 0);
  for (int i : positives)
    for (int pool : design.assignment[static_cast<std::size_t>(i)])
      out.pools[static_cast<std::size_t>(pool)] = 1;
  if (errors.fp > 0 || errors.fn > 0) {
    Rng rng(seed);
    for (auto& state : out.pools) {
      const double flip = state ? errors.fn : errors.fp;
      if (flip > 0 && rng.unit() < flip) state ^= 1;
    }
  }
  return out;
}

namespace {

// Shared scratch for repeated truth classification against one design.
struct TruthClassifier {
  const PoolingDesign& d;
  std::vector<std::vector<int>> members;
  std::vector<int> degree;
  std::vector<int> zero_degree_clones;
  // scratch
  std::vector<int> cover;       // per clone: covered-pool count
  std::vector<int> pool_pos;    // per pool: positive members
  std::vector<int> pool_unres;  // per pool: unresolved-negative members
  std::vector<std::uint8_t> is_positive;
  std::vector<int> touched_clones, touched_pools, unres;

  explicit TruthClassifier(const PoolingDesign& design)
      : d(design),
        members(pool_members(design)),
        degree(static_cast<std::size_t>(design.n)),
        cover(static_cast<std::size_t>(design.n), 0),
        pool_pos(static_cast<std::size_t>(design.v), 0),
        pool_unres(static_cast<std::size_t>(design.v), 0),
        is_positive(static_cast<std::size_t>(design.n), 0) {
    for (int i = 0; i < design.n; ++i) {
      degree[static_cast<std::size_t>(i)] =
          static_cast<int>(design.assignment[static_cast<std::size_t>(i)].size());
      if (degree[static_cast<std::size_t>(i)] == 0) zero_degree_clones.push_back(i);
    }
  }

  // Returns (#resolved positives, unresolved negatives in `unres`).
  // Touches only pools covered by positives, so a replicate costs
  // O(sum of |pool| over positive pools).
  long run(const std::vector<int>& positives) {
    touched_clones.clear();
    touched_pools.clear();
    unres.clear();
    for (int i : positives) is_positive[static_cast<std::size_t>(i)] = 1;
    for (int i : positives) {
      for (int pool : d.assignment[static_cast<std::size_t>(i)]) {
        if (pool_pos[static_cast<std::size_t>(pool)]++ == 0) {
          touched_pools.push_back(pool);
          for (int clone : members[static_cast<std::size_t>(pool)]) {
            if (cover[static_cast<std::size_t>(clone)]++ == 0)
              touched_clones.push_back(clone);
          }
        }
      }
    }
    for (int clone : touched_clones) {
      if (!is_positive[static_cast<std::size_t>(clone)] &&
          cover[static_cast<std::size_t>(clone)] ==
              degree[static_cast<std::size_t>(clone)])
        unres.push_back(clone);
    }
    // Clones in no pool can never see a negative pool.
    for (int clone : zero_degree_clones)
      if (!is_positive[static_cast<std::size_t>(clone)]) unres.push_back(clone);
    for (int u : unres)
      for (int pool : d.assignment[static_cast<std::size_t>(u)])
        ++pool_unres[static_cast<std::size_t>(pool)];
    long resolved = 0;
    for (int i : positives) {
      for (int pool : d.assignment[static_cast<std::size_t>(i)]) {
        if (pool_pos[static_cast<std::size_t>(pool)] == 1 &&
            pool_unres[static_cast<std::size_t>(pool)] == 0) {
          ++resolved;
          break;
        }
      }
    }
    // reset scratch
    for (int u : unres)
      for (int pool : d.assignment[static_cast<std::size_t>(u)])
        pool_unres[static_cast<std::size_t>(pool)] = 0;
    for (int clone : touched_clones) cover[static_cast<std::size_t>(clone)] = 0;
    for (int pool : touched_pools) pool_pos[static_cast<std::size_t>(pool)] = 0;
    for (int i : positives) is_positive[static_cast<std::size_t>(i)] = 0;
    return resolved;
  }
};

}  // namespace

ClassificationReport classify_truth(const PoolingDesign& design,
                                    const std::vector<int>& positives) {
  for (int i : positives)
    if (i < 0 || i >= design.n)
      throw std::invalid_argument("classify_truth: positive index out of range");
  ClassificationReport rep;
  rep.category.assign(static_cast<std::size_t>(design.n),
                      CloneCategory::resolved_negative);

  std::vector<std::uint8_t> pool_positive(static_cast<std::size_t>(design.v), 0);
  std::vector<std::uint8_t> is_pos(static_cast<std::size_t>(design.n), 0);
  for (int i : positives) {
    is_pos[static_cast<std::size_t>(i)] = 1;
    for (int pool : design.assignment[static_cast<std::size_t>(i)])
      pool_positive[static_cast<std::size_t>(pool)] = 1;
  }

  // Stage 1: unresolved negatives.
  std::vector<int> pool_pos_count(static_cast<std::size_t>(design.v), 0);
  std::vector<int> pool_unres_count(static_cast<std::size_t>(design.v), 0);
  for (int i : positives)
    for (int pool : design.assignment[static_cast<std::size_t>(i)])
      ++pool_pos_count[static_cast<std::size_t>(pool)];
  for (int i = 0; i < design.n; ++i) {
    if (is_pos[static_cast<std::size_t>(i)]) continue;
    bool all_positive = true;
    for (int pool : design.assignment[static_cast<std::size_t>(i)])
      if (!pool_positive[static_cast<std::size_t>(pool)]) {
        all_positive = false;
        break;
      }
    if (all_positive) {
      rep.category[static_cast<std::size_t>(i)] = CloneCategory::unresolved_negative;
      for (int pool : design.assignment[static_cast<std::size_t>(i)])
        ++pool_unres_count[static_cast<std::size_t>(pool)];
    }
  }

  // Stage 2: positives resolve against both positives and unresolved negatives.
  for (int i : positives) {
    bool resolved = false;
    for (int pool : design.assignment[static_cast<std::size_t>(i)]) {
      if (pool_pos_count[static_cast<std::size_t>(pool)] == 1 &&
          pool_unres_count[static_cast<std::size_t>(pool)] == 0) {
        resolved = true;
        break;
      }
    }
    rep.category[static_cast<std::size_t>(i)] = resolved
                                                    ? CloneCategory::resolved_positive
                                                    : CloneCategory::unresolved_positive;
  }
  for (auto c : rep.category) ++rep.counts[static_cast<std::size_t>(c)];
  return rep;
}

ObservedPartition classify_observed(const PoolingDesign& design,
                                    const AssayOutcome& outcome) {
  if (static_cast<int>(outcome.pools.size()) != design.v)
    throw std::invalid_argument("classify_observed: assay length != v");
  ObservedPartition part;
  part.is_candidate.assign(static_cast<std::size_t>(design.n), 1);
  for (int i = 0; i < design.n; ++i) {
    for (int pool : design.assignment[static_cast<std::size_t>(i)]) {
      if (!outcome.pools[static_cast<std::size_t>(pool)]) {
        part.is_candidate[static_cast<std::size_t>(i)] = 0;
        break;
      }
    }
    if (part.is_candidate[static_cast<std::size_t>(i)])
      ++part.candidate_count;
    else
      ++part.observed_negative_count;
  }
  return part;
}

namespace {

struct Accumulator {
  double sum = 0, sumsq = 0;
  void add(double x) {
    sum += x;
    sumsq += x * x;
  }
  CategoryStats stats(long reps) const {
    CategoryStats s;
    s.mean = sum / static_cast<double>(reps);
    const double var =
        std::max(0.0, sumsq / static_cast<double>(reps) - s.mean * s.mean);
    s.se = std::sqrt(var / static_cast<double>(reps));
    return s;
  }
};

void record_resolved_given_p(std::vector<std::vector<long>>& table, long p, long j) {
  if (static_cast<long>(table.size()) <= p) table.resize(static_cast<std::size_t>(p) + 1);
  auto& row = table[static_cast<std::size_t>(p)];
  if (static_cast<long>(row.size()) <= j) row.resize(static_cast<std::size_t>(j) + 1, 0);
  ++row[static_cast<std::size_t>(j)];
}

}  // namespace

SimulationResult simulate_metrics(const PoolingDesign& design,
                                  const LibraryModel& model,
                                  const ErrorModel& errors, long replicates,
                                  RngSeed seed) {
  check_error_model(errors);
  if (replicates < 1) throw std::invalid_argument("simulate_metrics: replicates >= 1");
  if (model.n != design.n)
    throw std::invalid_argument("simulate_metrics: model n != design n");
  const bool with_errors = errors.fp > 0 || errors.fn > 0;
  TruthClassifier cls(design);
  const double t = model.c / static_cast<double>(model.n);

  Accumulator arp, aup, arn, aun, acand, apos;
  std::vector<std::vector<long>> table;
  std::vector<std::uint8_t> observed(static_cast<std::size_t>(design.v), 0);

  for (long rep = 0; rep < replicates; ++rep) {
    Rng rng(substream(seed, static_cast<std::uint64_t>(rep)));
    const long pcount = rng.binomial(design.n, t);
    std::vector<int> positives = rng.ksubset(design.n, static_cast<int>(pcount));
    const long resolved = cls.run(positives);
    const long unres = static_cast<long>(cls.unres.size());
    arp.add(static_cast<double>(resolved));
    aup.add(static_cast<double>(pcount - resolved));
    aun.add(static_cast<double>(unres));
    arn.add(static_cast<double>(design.n - pcount - unres));
    apos.add(static_cast<double>(pcount));
    record_resolved_given_p(table, pcount, resolved);

    if (with_errors) {
      // Observed pools: flip true states; then count clones with no
      // observed-negative pool via the covered-pool trick over OP.
      std::fill(observed.begin(), observed.end(), 0);
      for (int i : positives)
        for (int pool : design.assignment[static_cast<std::size_t>(i)])
          observed[static_cast<std::size_t>(pool)] = 1;
      long candidates = 0;
      std::vector<int> op;
      for (int pool = 0; pool < design.v; ++pool) {
        const bool truth = observed[static_cast<std::size_t>(pool)];
        const double flip = truth ? errors.fn : errors.fp;
        bool obs = truth;
        if (flip > 0 && rng.unit() < flip) obs = !obs;
        observed[static_cast<std::size_t>(pool)] = obs ? 1 : 0;
        if (obs) op.push_back(pool);
      }
      // count clones all of whose pools are observed positive
      for (int pool : op)
        for (int clone : cls.members[static_cast<std::size_t>(pool)])
          if (cls.cover[static_cast<std::size_t>(clone)]++ == 0)
            cls.touched_clones.push_back(clone);
      for (int clone : cls.touched_clones)
        if (cls.cover[static_cast<std::size_t>(clone)] ==
            cls.degree[static_cast<std::size_t>(clone)])
          ++candidates;
      for (int clone : cls.touched_clones) cls.cover[static_cast<std::size_t>(clone)] = 0;
      cls.touched_clones.clear();
      candidates += static_cast<long>(cls.zero_degree_clones.size());
      acand.add(static_cast<double>(candidates));
    }
  }

  SimulationResult res;
  res.replicates = replicates;
  res.resolved_positive = arp.stats(replicates);
  res.unresolved_positive = aup.stats(replicates);
  res.resolved_negative = arn.stats(replicates);
  res.unresolved_negative = aun.stats(replicates);
  res.mean_positives = apos.stats(replicates).mean;
  res.has_candidates = with_errors;
  if (with_errors) res.candidates = acand.stats(replicates);
  res.resolved_given_p = std::move(table);
  return res;
}

SimulationResult simulate_metrics_random_ksets(DesignShape shape,
                                               const LibraryModel& model,
                                               const ErrorModel& errors,
                                               long replicates, RngSeed seed) {
  check_error_model(errors);
  if (replicates < 1) throw std::invalid_argument("replicates >= 1");
  const bool with_errors = errors.fp > 0 || errors.fn > 0;
  const long n = model.n;
  const int v = shape.v;
  const int k = shape.k;
  const double t = model.c / static_cast<double>(n);

  // C(u, k) / C(v, k) for u = 0..v, in doubles.
  std::vector<double> subset_prob(static_cast<std::size_t>(v) + 1, 0.0);
  for (int u = k; u <= v; ++u) {
    double r = 1.0;
    for (int m = 0; m < k; ++m)
      r *= static_cast<double>(u - m) / static_cast<double>(v - m);
    subset_prob[static_cast<std::size_t>(u)] = r;
  }

  Accumulator arp, aup, arn, aun, acand, apos;
  std::vector<std::vector<long>> table;
  std::vector<int> pool_mark(static_cast<std::size_t>(v), 0);    // positives per pool
  std::vector<int> unres_mark(static_cast<std::size_t>(v), 0);   // unresolved negs per pool
  std::vector<std::uint8_t> obs_pos(static_cast<std::size_t>(v), 0);

  for (long rep = 0; rep < replicates; ++rep) {
    Rng rng(substream(seed, static_cast<std::uint64_t>(rep)));
    const long p = rng.binomial(n, t);
    std::vector<std::vector<int>> pos_sets;
    pos_sets.reserve(static_cast<std::size_t>(p));
    std::vector<int> union_pools;
    for (long i = 0; i < p; ++i) {
      pos_sets.push_back(rng.ksubset(v, k));
      for (int pool : pos_sets.back())
        if (pool_mark[static_cast<std::size_t>(pool)]++ == 0)
          union_pools.push_back(pool);
    }
    std::sort(union_pools.begin(), union_pools.end());
    const int usz = static_cast<int>(union_pools.size());

    // Unresolved negatives: count ~ Binomial(n-p, C(|U|,k)/C(v,k)), then
    // their sets are uniform k-subsets of U.
    const long u_count =
        rng.binomial(n - p, subset_prob[static_cast<std::size_t>(usz)]);
    std::vector<std::vector<int>> unres_sets;
    unres_sets.reserve(static_cast<std::size_t>(u_count));
    for (long i = 0; i < u_count; ++i) {
      std::vector<int> idx = rng.ksubset(usz, k);
      std::vector<int> set;
      set.reserve(static_cast<std::size_t>(k));
      for (int ix : idx) set.push_back(union_pools[static_cast<std::size_t>(ix)]);
      unres_sets.push_back(std::move(set));
      for (int pool : unres_sets.back()) ++unres_mark[static_cast<std::size_t>(pool)];
    }

    long resolved = 0;
    for (const auto& s : pos_sets) {
      for (int pool : s) {
        if (pool_mark[static_cast<std::size_t>(pool)] == 1 &&
            unres_mark[static_cast<std::size_t>(pool)] == 0) {
          ++resolved;
          break;
        }
      }
    }
    arp.add(static_cast<double>(resolved));
    aup.add(static_cast<double>(p - resolved));
    aun.add(static_cast<double>(u_count));
    arn.add(static_cast<double>(n - p - u_count));
    apos.add(static_cast<double>(p));
    record_resolved_given_p(table, p, resolved);

    if (with_errors) {
      // Flip pools in U explicitly; outside U only counts are needed.
      int op_in_u = 0;
      for (int pool : union_pools) {
        bool obs = true;
        if (errors.fn > 0 && rng.unit() < errors.fn) obs = false;
        obs_pos[static_cast<std::size_t>(pool)] = obs ? 1 : 0;
        if (obs) ++op_in_u;
      }
      const long op_out = rng.binomial(v - usz, errors.fp);
      long candidates = 0;
      for (const auto& s : pos_sets) {
        bool all = true;
        for (int pool : s)
          if (!obs_pos[static_cast<std::size_t>(pool)]) {
            all = false;
            break;
          }
        if (all) ++candidates;
      }
      for (const auto& s : unres_sets) {
        bool all = true;
        for (int pool : s)
          if (!obs_pos[static_cast<std::size_t>(pool)]) {
            all = false;
            break;
          }
        if (all) ++candidates;
      }
      // Remaining negatives are uniform over k-sets not inside U.
      const int op_total = op_in_u + static_cast<int>(op_out);
      const double num = binom_double(op_total, k) - binom_double(op_in_u, k);
      const double den = binom_double(v, k) - binom_double(usz, k);
      if (den > 0 && num > 0)
        candidates += rng.binomial(n - p - u_count, num / den);
      acand.add(static_cast<double>(candidates));
    }

    for (int pool : union_pools) {
      pool_mark[static_cast<std::size_t>(pool)] = 0;
      unres_mark[static_cast<std::size_t>(pool)] = 0;
      obs_pos[static_cast<std::size_t>(pool)] = 0;
    }
  }

  SimulationResult res;
  res.replicates = replicates;
  res.resolved_positive = arp.stats(replicates);
  res.unresolved_positive = aup.stats(replicates);
  res.resolved_negative = arn.stats(replicates);
  res.unresolved_negative = aun.stats(replicates);
  res.mean_positives = apos.stats(replicates).mean;
  res.has_candidates = with_errors;
  if (with_errors) res.candidates = acand.stats(replicates);
  res.resolved_given_p = std::move(table);
  return res;
}

void write_simulation_csv(std::ostream& out, const SimulationResult& r) {
  out << "category,mean,stderr\n";
  out << "resolved_positive," << r.resolved_positive.mean << ','
      << r.resolved_positive.se << "\n";
  out << "unresolved_positive," << r.unresolved_positive.mean << ','
      << r.unresolved_positive.se << "\n";
  out << "resolved_negative," << r.resolved_negative.mean << ','
      << r.resolved_negative.se << "\n";
  out << "unresolved_negative," << r.unresolved_negative.mean << ','
      << r.unresolved_negative.se << "\n";
  if (r.has_candidates)
    out << "observed_candidates," << r.candidates.mean << ',' << r.candidates.se
        << "\n";
}

void write_assay_file(const std::string& path, const AssayOutcome& outcome) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (auto b : outcome.pools) out << (b ? '1' : '0');
  out << "\n";
}

AssayOutcome read_assay_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  std::getline(in, line);
  AssayOutcome out;
  out.simulated = false;
  for (char ch : line) {
    if (ch == '0')
      out.pools.push_back(0);
    else if (ch == '1')
      out.pools.push_back(1);
    else if (ch == '\r')
      continue;
    else
      throw std::invalid_argument("assay file: only 0/1 characters allowed");
  }
  return out;
}

}  // namespace poolkit

#include "poolkit/design.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <sstream>

namespace poolkit {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

int common_set_size(const PoolingDesign& d) {
  if (d.n == 0) return -1;
  const std::size_t k0 = d.assignment.front().size();
  for (const auto& row : d.assignment)
    if (row.size() != k0) return -1;
  return static_cast<int>(k0);
}

// Intersection size of two sorted vectors.
int intersection_size(const std::vector<int>& a, const std::vector<int>& b) {
  int cnt = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib)
      ++ia;
    else if (*ib < *ia)
      ++ib;
    else {
      ++cnt;
      ++ia;
      ++ib;
    }
  }
  return cnt;
}

}  // namespace

PoolingDesign generate_random_ksets(int n, DesignShape shape, RngSeed seed) {
  require(n >= 0, "generate_random_ksets: n >= 0");
  PoolingDesign d;
  d.n = n;
  d.v = shape.v;
  d.kind = DesignKind::random_ksets;
  d.k = shape.k;
  d.t = shape.k;
  d.assignment.reserve(static_cast<std::size_t>(n));
  Rng rng(seed);
  for (int i = 0; i < n; ++i) d.assignment.push_back(rng.ksubset(shape.v, shape.k));
  return d;
}

namespace {

struct PackingState {
  std::vector<std::vector<int>> sets;
  std::vector<std::vector<int>> members;  // pool -> clones
  std::vector<int> sizes;
  std::vector<int> overlap_scratch;  // per-clone co-occurrence counter

  explicit PackingState(int n, int v)
      : members(static_cast<std::size_t>(v)),
        sizes(static_cast<std::size_t>(v), 0),
        overlap_scratch(static_cast<std::size_t>(n), 0) {}

  // Max pairwise intersection of `candidate` (clone `self` excluded) with
  // the current design, via co-occurrence counting over pool members.
  bool fits(const std::vector<int>& candidate, int t, int self = -1) {
    bool ok = true;
    std::vector<int> touched;
    for (int pool : candidate) {
      for (int clone : members[static_cast<std::size_t>(pool)]) {
        if (clone == self) continue;
        int& c = overlap_scratch[static_cast<std::size_t>(clone)];
        if (c == 0) touched.push_back(clone);
        if (++c > t) {
          ok = false;
          goto done;
        }
      }
    }
  done:
    for (int clone : touched) overlap_scratch[static_cast<std::size_t>(clone)] = 0;
    return ok;
  }

  void add(int clone, const std::vector<int>& set) {
    for (int pool : set) {
      members[static_cast<std::size_t>(pool)].push_back(clone);
      ++sizes[static_cast<std::size_t>(pool)];
    }
    sets.push_back(set);
  }

  void move_pool(int clone, int from, int to) {
    auto& set = sets[static_cast<std::size_t>(clone)];
    *std::find(set.begin(), set.end(), from) = to;
    std::sort(set.begin(), set.end());
    auto& mf = members[static_cast<std::size_t>(from)];
    mf.erase(std::find(mf.begin(), mf.end(), clone));
    members[static_cast<std::size_t>(to)].push_back(clone);
    --sizes[static_cast<std::size_t>(from)];
    ++sizes[static_cast<std::size_t>(to)];
  }
};

long balance_deviation(const std::vector<int>& sizes, int lo, int hi) {
  long dev = 0;
  for (int s : sizes) {
    if (s < lo) dev += lo - s;
    if (s > hi) dev += s - hi;
  }
  return dev;
}

}  // namespace

PoolingDesign generate_ksets_packing(int n, DesignShape shape,
                                     const PackingConstraints& constraints,
                                     RngSeed seed) {
  require(n >= 0, "generate_ksets_packing: n >= 0");
  require(constraints.t >= 0 && constraints.t <= shape.k,
          "generate_ksets_packing: need 0 <= t <= k");
  const long total = static_cast<long>(n) * shape.k;
  int lo = 0, hi = n;
  if (constraints.balance) {
    lo = constraints.balance->first;
    hi = constraints.balance->second;
    require(lo <= hi, "balance range inverted");
    const long mean_floor = total / shape.v;
    const long mean_ceil = (total + shape.v - 1) / shape.v;
    const bool holds_floor = lo <= mean_floor && mean_floor <= hi;
    const bool holds_ceil = lo <= mean_ceil && mean_ceil <= hi;
    require(holds_floor || holds_ceil, "balance range excludes the mean pool size");
    require(static_cast<long>(lo) * shape.v <= total &&
                static_cast<long>(hi) * shape.v >= total,
            "balance range cannot hold n*k memberships");
  }

  long budget = constraints.max_retries;
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng(substream(seed, attempt));
    PackingState st(n, shape.v);
    for (int clone = 0; clone < n; ++clone) {
      for (;;) {
        std::vector<int> cand = rng.ksubset(shape.v, shape.k);
        if (constraints.t >= shape.k || st.fits(cand, constraints.t)) {
          st.add(clone, cand);
          break;
        }
        if (--budget <= 0)
          throw GenerationExhausted("k-sets packing: retry budget exhausted");
      }
    }

    if (constraints.balance) {
      // Swap pass: move memberships out of over-full pools into under-full
      // ones while preserving the intersection bound.
      bool stuck = false;
      while (balance_deviation(st.sizes, lo, hi) > 0 && !stuck) {
        int from = -1, to = -1;
        for (int p = 0; p < shape.v; ++p) {
          if (st.sizes[static_cast<std::size_t>(p)] > hi &&
              (from < 0 || st.sizes[static_cast<std::size_t>(p)] >
                               st.sizes[static_cast<std::size_t>(from)]))
            from = p;
          if (st.sizes[static_cast<std::size_t>(p)] < lo &&
              (to < 0 || st.sizes[static_cast<std::size_t>(p)] <
                             st.sizes[static_cast<std::size_t>(to)]))
            to = p;
        }
        // Donor may be any pool that can spare a membership.
        if (from < 0) {
          for (int p = 0; p < shape.v; ++p)
            if (st.sizes[static_cast<std::size_t>(p)] > lo &&
                (from < 0 || st.sizes[static_cast<std::size_t>(p)] >
                                 st.sizes[static_cast<std::size_t>(from)]))
              from = p;
        }
        if (to < 0) {
          for (int p = 0; p < shape.v; ++p)
            if (st.sizes[static_cast<std::size_t>(p)] < hi &&
                (to < 0 || st.sizes[static_cast<std::size_t>(p)] <
                               st.sizes[static_cast<std::size_t>(to)]))
              to = p;
        }
        stuck = true;
        if (from < 0 || to < 0 || from == to) break;
        const auto donors = st.members[static_cast<std::size_t>(from)];
        const std::size_t off = rng.below(donors.size());
        for (std::size_t s = 0; s < donors.size(); ++s) {
          const int clone = donors[(s + off) % donors.size()];
          const auto& set = st.sets[static_cast<std::size_t>(clone)];
          if (std::find(set.begin(), set.end(), to) != set.end()) continue;
          std::vector<int> cand = set;
          *std::find(cand.begin(), cand.end(), from) = to;
          std::sort(cand.begin(), cand.end());
          if (constraints.t >= shape.k || st.fits(cand, constraints.t, clone)) {
            st.move_pool(clone, from, to);
            stuck = false;
            break;
          }
        }
        if (stuck && --budget <= 0)
          throw GenerationExhausted("k-sets packing: balance repair exhausted");
      }
      if (balance_deviation(st.sizes, lo, hi) > 0) {
        if (--budget <= 0)
          throw GenerationExhausted("k-sets packing: balance repair exhausted");
        continue;  // regenerate from the next substream
      }
    }

    PoolingDesign d;
    d.n = n;
    d.v = shape.v;
    d.kind = DesignKind::ksets_packing;
    d.k = shape.k;
    d.t = constraints.t;
    d.assignment = std::move(st.sets);
    return d;
  }
}

PoolingDesign generate_row_column(int lots, int dishes_per_lot, int rows, int cols) {
  require(lots >= 1 && dishes_per_lot >= 1 && rows >= 1 && cols >= 1,
          "generate_row_column: positive dimensions");
  const int per_lot = rows + cols + dishes_per_lot;
  const int wells = rows * cols;
  PoolingDesign d;
  d.n = lots * dishes_per_lot * wells;
  d.v = lots * per_lot;
  d.kind = DesignKind::row_column;
  d.k = 3;
  d.t = 3;
  d.assignment.reserve(static_cast<std::size_t>(d.n));
  for (int lot = 0; lot < lots; ++lot) {
    const int base = lot * per_lot;
    for (int dish = 0; dish < dishes_per_lot; ++dish) {
      for (int w = 0; w < wells; ++w) {
        const int r = w / cols;
        const int c = w % cols;
        std::vector<int> pools = {base + r, base + rows + c,
                                  base + rows + cols + dish};
        std::sort(pools.begin(), pools.end());
        d.assignment.push_back(std::move(pools));
      }
    }
  }
  return d;
}

namespace {

// 3x3 affine map mod side, invertible (det coprime to side).
struct AffineMap {
  long a[3][3];
  long b[3];
};

long det3_mod(const long m[3][3], long mod) {
  const long d = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                 m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                 m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  return ((d % mod) + mod) % mod;
}

AffineMap draw_affine(Rng& rng, long side) {
  AffineMap m{};
  for (;;) {
    for (auto& row : m.a)
      for (long& x : row) x = static_cast<long>(rng.below(static_cast<std::uint64_t>(side)));
    const long d = det3_mod(m.a, side);
    if (d != 0 && std::gcd(d, side) == 1) break;
  }
  for (long& x : m.b) x = static_cast<long>(rng.below(static_cast<std::uint64_t>(side)));
  return m;
}

}  // namespace

PoolingDesign generate_cubic(int n, int side, int configurations, RngSeed seed) {
  require(side >= 1 && configurations >= 1, "generate_cubic: positive dimensions");
  const long sites = static_cast<long>(side) * side * side;
  if (n > sites) throw std::invalid_argument("generate_cubic: n exceeds side^3");
  Rng rng(seed);

  // Distinct lattice sites via partial Fisher-Yates.
  std::vector<long> all(static_cast<std::size_t>(sites));
  std::iota(all.begin(), all.end(), 0L);
  std::vector<long> site(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    const long j = i + static_cast<long>(rng.below(static_cast<std::uint64_t>(sites - i)));
    std::swap(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(j)]);
    site[static_cast<std::size_t>(i)] = all[static_cast<std::size_t>(i)];
  }

  std::vector<AffineMap> maps;
  for (int cfg = 1; cfg < configurations; ++cfg) maps.push_back(draw_affine(rng, side));

  PoolingDesign d;
  d.n = n;
  d.v = configurations * 3 * side;
  d.kind = DesignKind::cubic;
  d.k = 3 * configurations;
  d.t = d.k;
  d.assignment.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const long s = site[static_cast<std::size_t>(i)];
    long q[3] = {s % side, (s / side) % side, s / (static_cast<long>(side) * side)};
    auto& pools = d.assignment[static_cast<std::size_t>(i)];
    pools.reserve(static_cast<std::size_t>(d.k));
    for (int cfg = 0; cfg < configurations; ++cfg) {
      long p[3];
      if (cfg == 0) {
        p[0] = q[0]; p[1] = q[1]; p[2] = q[2];
      } else {
        const AffineMap& m = maps[static_cast<std::size_t>(cfg - 1)];
        for (int axis = 0; axis < 3; ++axis)
          p[axis] = (m.a[axis][0] * q[0] + m.a[axis][1] * q[1] +
                     m.a[axis][2] * q[2] + m.b[axis]) % side;
      }
      const int base = cfg * 3 * side;
      for (int axis = 0; axis < 3; ++axis)
        pools.push_back(base + axis * side + static_cast<int>(p[axis]));
    }
    std::sort(pools.begin(), pools.end());
  }
  return d;
}

std::vector<std::vector<int>> pool_members(const PoolingDesign& d) {
  std::vector<std::vector<int>> members(static_cast<std::size_t>(d.v));
  for (int i = 0; i < d.n; ++i)
    for (int pool : d.assignment[static_cast<std::size_t>(i)])
      members[static_cast<std::size_t>(pool)].push_back(i);
  return members;
}

ValidationReport validate(const PoolingDesign& d,
                          const std::optional<ExpectedProperties>& expected) {
  ValidationReport rep;
  rep.n = d.n;
  rep.v = d.v;
  rep.pool_sizes.assign(static_cast<std::size_t>(d.v), 0);
  for (const auto& row : d.assignment)
    for (int pool : row) ++rep.pool_sizes[static_cast<std::size_t>(pool)];
  rep.min_pool_size = rep.pool_sizes.empty()
                          ? 0
                          : *std::min_element(rep.pool_sizes.begin(), rep.pool_sizes.end());
  rep.max_pool_size = rep.pool_sizes.empty()
                          ? 0
                          : *std::max_element(rep.pool_sizes.begin(), rep.pool_sizes.end());
  rep.k = common_set_size(d);
  rep.k_uniform = rep.k >= 0;

  // Duplicate k-sets: sort a copy of the rows.
  {
    std::vector<const std::vector<int>*> rows;
    rows.reserve(static_cast<std::size_t>(d.n));
    for (const auto& r : d.assignment) rows.push_back(&r);
    std::sort(rows.begin(), rows.end(),
              [](const auto* a, const auto* b) { return *a < *b; });
    for (std::size_t i = 0, j = 0; i < rows.size(); i = j) {
      j = i + 1;
      while (j < rows.size() && *rows[j] == *rows[i]) ++j;
      const long run = static_cast<long>(j - i);
      rep.duplicate_kset_pairs += run * (run - 1) / 2;
    }
  }

  // Max pairwise intersection by co-occurrence counting; skipped when the
  // pool-size profile makes it quadratic in practice.
  {
    double work = 0;
    for (long s : rep.pool_sizes) work += static_cast<double>(s) * static_cast<double>(s);
    if (work <= 2e8) {
      const auto members = pool_members(d);
      std::vector<int> overlap(static_cast<std::size_t>(d.n), 0);
      std::vector<int> touched;
      for (int i = 0; i < d.n; ++i) {
        touched.clear();
        for (int pool : d.assignment[static_cast<std::size_t>(i)]) {
          for (int other : members[static_cast<std::size_t>(pool)]) {
            if (other <= i) continue;
            if (overlap[static_cast<std::size_t>(other)]++ == 0) touched.push_back(other);
          }
        }
        for (int other : touched) {
          rep.max_pairwise_intersection =
              std::max(rep.max_pairwise_intersection,
                       overlap[static_cast<std::size_t>(other)]);
          overlap[static_cast<std::size_t>(other)] = 0;
        }
      }
    } else {
      rep.pairwise_checked = false;
    }
  }

  if (expected) {
    if (expected->k && (!rep.k_uniform || rep.k != *expected->k))
      rep.violations.push_back("set size differs from expected k");
    if (expected->t && rep.pairwise_checked &&
        rep.max_pairwise_intersection > *expected->t)
      rep.violations.push_back("pairwise intersection exceeds expected t");
    if (expected->balance &&
        (rep.min_pool_size < expected->balance->first ||
         rep.max_pool_size > expected->balance->second))
      rep.violations.push_back("pool sizes outside expected balance range");
  }
  return rep;
}

std::string to_string(DesignKind kind) {
  switch (kind) {
    case DesignKind::random_ksets: return "random_ksets";
    case DesignKind::ksets_packing: return "ksets_packing";
    case DesignKind::row_column: return "row_column";
    case DesignKind::cubic: return "cubic";
    case DesignKind::explicit_kind: return "explicit";
  }
  return "explicit";
}

std::optional<DesignKind> design_kind_from_string(const std::string& name) {
  if (name == "random_ksets") return DesignKind::random_ksets;
  if (name == "ksets_packing") return DesignKind::ksets_packing;
  if (name == "row_column") return DesignKind::row_column;
  if (name == "cubic") return DesignKind::cubic;
  if (name == "explicit") return DesignKind::explicit_kind;
  return std::nullopt;
}

std::string serialize(const PoolingDesign& d) {
  std::ostringstream out;
  out << "# kind: " << to_string(d.kind) << "\n";
  out << d.n << ' ' << d.v << ' ' << d.k << ' ' << d.t << "\n";
  for (const auto& row : d.assignment) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ' ';
      out << row[i];
    }
    out << "\n";
  }
  return out.str();
}

PoolingDesign parse_design(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  PoolingDesign d;
  bool have_header = false;
  int clones_read = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string tag = "# kind: ";
      if (line.rfind(tag, 0) == 0) {
        if (auto kind = design_kind_from_string(line.substr(tag.size())))
          d.kind = *kind;
      }
      continue;
    }
    std::istringstream ls(line);
    if (!have_header) {
      if (!(ls >> d.n >> d.v >> d.k >> d.t))
        throw std::invalid_argument("design file: bad header");
      if (d.n < 0 || d.v < 0) throw std::invalid_argument("design file: bad sizes");
      have_header = true;
      d.assignment.reserve(static_cast<std::size_t>(d.n));
      continue;
    }
    if (clones_read >= d.n) throw std::invalid_argument("design file: extra rows");
    std::vector<int> row;
    int x;
    while (ls >> x) {
      if (x < 0 || x >= d.v)
        throw std::invalid_argument("design file: pool index out of range");
      if (!row.empty() && x <= row.back())
        throw std::invalid_argument("design file: indices not strictly increasing");
      row.push_back(x);
    }
    if (d.k >= 0 && static_cast<int>(row.size()) != d.k)
      throw std::invalid_argument("design file: row size differs from k");
    d.assignment.push_back(std::move(row));
    ++clones_read;
  }
  if (!have_header) throw std::invalid_argument("design file: missing header");
  if (clones_read != d.n) throw std::invalid_argument("design file: missing rows");
  return d;
}

void write_design_file(const std::string& path, const PoolingDesign& d) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << serialize(d);
}

PoolingDesign read_design_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_design(buf.str());
}

}  // namespace poolkit

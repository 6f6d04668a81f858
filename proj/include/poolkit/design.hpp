#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "poolkit/combinatorics.hpp"
#include "poolkit/rng.hpp"

namespace poolkit {

enum class DesignKind { random_ksets, ksets_packing, row_column, cubic, explicit_kind };

// Clone-by-pool incidence, stored as each clone's sorted pool-index set.
struct PoolingDesign {
  int n = 0;
  int v = 0;
  DesignKind kind = DesignKind::explicit_kind;
  int k = -1;  // common set size, -1 if rows differ
  int t = -1;  // packing bound; k when unconstrained; -1 when not k-uniform
  std::vector<std::vector<int>> assignment;

  bool operator==(const PoolingDesign&) const = default;
};

struct PackingConstraints {
  int t = 0;
  std::optional<std::pair<int, int>> balance;  // inclusive per-pool size range
  long max_retries = 200000;                   // rejected-draw budget
};

PoolingDesign generate_random_ksets(int n, DesignShape shape, RngSeed seed);

// Sequential rejection sampling on the pairwise-intersection bound, then a
// swap pass to pull per-pool sizes into the balance range.  Throws
// GenerationExhausted when the retry budget runs out.
PoolingDesign generate_ksets_packing(int n, DesignShape shape,
                                     const PackingConstraints& constraints,
                                     RngSeed seed);

// Per lot: one pool per row and per column spanning the lot's dishes, plus
// one pool per dish; every clone lands in exactly three pools.
PoolingDesign generate_row_column(int lots, int dishes_per_lot, int rows, int cols);

// Clones on distinct sites of a side^3 lattice; per configuration each clone
// joins the three coordinate-plane pools.  Configurations beyond the first
// re-map sites by a seeded invertible affine transform mod side.
PoolingDesign generate_cubic(int n, int side, int configurations, RngSeed seed);

struct ExpectedProperties {
  std::optional<int> k;
  std::optional<int> t;
  std::optional<std::pair<int, int>> balance;
};

struct ValidationReport {
  int n = 0;
  int v = 0;
  bool k_uniform = false;
  int k = -1;
  long duplicate_kset_pairs = 0;
  int max_pairwise_intersection = 0;
  bool pairwise_checked = true;  // false when skipped for size
  std::vector<long> pool_sizes;
  long min_pool_size = 0;
  long max_pool_size = 0;
  std::vector<std::string> violations;  // vs. expected, if given
  bool ok() const { return violations.empty(); }
};

ValidationReport validate(const PoolingDesign& design,
                          const std::optional<ExpectedProperties>& expected = {});

// Pool -> member clones adjacency.
std::vector<std::vector<int>> pool_members(const PoolingDesign& design);

// Text format: comment lines (#) allowed; header "n v k t"; then one line of
// sorted pool indices per clone.  Round-trips byte-exactly.
std::string serialize(const PoolingDesign& design);
PoolingDesign parse_design(const std::string& text);
void write_design_file(const std::string& path, const PoolingDesign& design);
PoolingDesign read_design_file(const std::string& path);

std::string to_string(DesignKind kind);
std::optional<DesignKind> design_kind_from_string(const std::string& name);

}  // namespace poolkit

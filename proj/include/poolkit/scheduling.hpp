#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "poolkit/design.hpp"

namespace poolkit {

// Clones fill plates in row-major well order; clone i sits in plate i/(r*c),
// well i mod (r*c).
struct PlateLayout {
  int rows = 8;
  int cols = 12;
  int plates = 0;  // 0 = as many as needed
  int wells_per_plate() const { return rows * cols; }
};

std::string well_name(const PlateLayout& layout, int well_index);

struct Transfer {
  int source_plate = 0;
  int source_well = 0;  // index within plate, row-major
  int dest_pool = 0;
  double volume_ul = 0;
};

struct TransferList {
  std::vector<Transfer> transfers;  // clone-major, pool ascending
  PlateLayout layout;
  double volume_per_transfer_ul = 0;
  int n = 0, v = 0;
};

// One record per (clone, pool) incidence.
TransferList emit_schedule(const PoolingDesign& design, const PlateLayout& layout,
                           double volume_per_transfer_ul);

struct ScheduleSummary {
  std::vector<long> pool_transfers;
  std::vector<double> pool_volume_ul;
  std::vector<long> plate_transfers;
  double total_volume_ul = 0;
};

ScheduleSummary schedule_summary(const TransferList& transfers);

void write_transfer_csv(std::ostream& out, const TransferList& transfers);

// Rebuild the incidence assignment from a transfer list (inverse of
// emit_schedule up to the design's bookkeeping fields).
std::vector<std::vector<int>> assignment_from_transfers(const TransferList& transfers);

}  // namespace poolkit

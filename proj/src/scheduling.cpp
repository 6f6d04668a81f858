#include "poolkit/scheduling.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace poolkit {

std::string well_name(const PlateLayout& layout, int well_index) {
  if (well_index < 0 || well_index >= layout.wells_per_plate())
    throw std::invalid_argument("well_name: index outside plate");
  const int r = well_index / layout.cols;
  const int c = well_index % layout.cols;
  std::string name;
  // Rows beyond 'Z' get a two-letter prefix; standard plates never need it.
  if (r < 26) {
    name.push_back(static_cast<char>('A' + r));
  } else {
    name.push_back(static_cast<char>('A' + r / 26 - 1));
    name.push_back(static_cast<char>('A' + r % 26));
  }
  name += std::to_string(c + 1);
  return name;
}

TransferList emit_schedule(const PoolingDesign& design, const PlateLayout& layout,
                           double volume_per_transfer_ul) {
  if (!(volume_per_transfer_ul > 0))
    throw std::invalid_argument("emit_schedule: volume must be positive");
  if (layout.plates > 0 &&
      static_cast<long>(layout.plates) * layout.wells_per_plate() < design.n)
    throw std::invalid_argument("emit_schedule: layout too small for n clones");
  TransferList list;
  list.layout = layout;
  list.volume_per_transfer_ul = volume_per_transfer_ul;
  list.n = design.n;
  list.v = design.v;
  const int wells = layout.wells_per_plate();
  for (int clone = 0; clone < design.n; ++clone) {
    const int plate = clone / wells;
    const int well = clone % wells;
    for (int pool : design.assignment[static_cast<std::size_t>(clone)])
      list.transfers.push_back(Transfer{plate, well, pool, volume_per_transfer_ul});
  }
  return list;
}

ScheduleSummary schedule_summary(const TransferList& list) {
  ScheduleSummary s;
  s.pool_transfers.assign(static_cast<std::size_t>(list.v), 0);
  s.pool_volume_ul.assign(static_cast<std::size_t>(list.v), 0.0);
  for (const Transfer& tr : list.transfers) {
    ++s.pool_transfers[static_cast<std::size_t>(tr.dest_pool)];
    s.pool_volume_ul[static_cast<std::size_t>(tr.dest_pool)] += tr.volume_ul;
    if (tr.source_plate >= static_cast<int>(s.plate_transfers.size()))
      s.plate_transfers.resize(static_cast<std::size_t>(tr.source_plate) + 1, 0);
    ++s.plate_transfers[static_cast<std::size_t>(tr.source_plate)];
    s.total_volume_ul += tr.volume_ul;
  }
  return s;
}

void write_transfer_csv(std::ostream& out, const TransferList& list) {
  out << "source_plate,source_well,dest_pool,volume_ul\n";
  for (const Transfer& tr : list.transfers)
    out << tr.source_plate << ',' << well_name(list.layout, tr.source_well) << ','
        << tr.dest_pool << ',' << tr.volume_ul << "\n";
}

std::vector<std::vector<int>> assignment_from_transfers(const TransferList& list) {
  std::vector<std::vector<int>> assignment(static_cast<std::size_t>(list.n));
  const int wells = list.layout.wells_per_plate();
  for (const Transfer& tr : list.transfers) {
    const int clone = tr.source_plate * wells + tr.source_well;
    if (clone < 0 || clone >= list.n)
      throw std::invalid_argument("assignment_from_transfers: well outside layout");
    assignment[static_cast<std::size_t>(clone)].push_back(tr.dest_pool);
  }
  for (auto& row : assignment) std::sort(row.begin(), row.end());
  return assignment;
}

}  // namespace poolkit

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "poolkit/design.hpp"
#include "poolkit/scheduling.hpp"

using namespace poolkit;

namespace {

// the six-pool, five-clone incidence-matrix fixture: pool 1 holds clones
// 1, 3, 4 and pool 4 holds only clone 5 (1-based labels)
PoolingDesign figure_design() {
  PoolingDesign d;
  d.n = 5;
  d.v = 6;
  d.k = 2;
  d.t = 2;
  d.kind = DesignKind::explicit_kind;
  d.assignment = {{0, 5}, {1, 2}, {0, 1}, {0, 2}, {3, 4}};
  return d;
}

}  // namespace

TEST_CASE("well naming is row-major A1..H12") {
  const PlateLayout layout;
  CHECK(well_name(layout, 0) == "A1");
  CHECK(well_name(layout, 11) == "A12");
  CHECK(well_name(layout, 12) == "B1");
  CHECK(well_name(layout, 95) == "H12");
  CHECK_THROWS_AS(well_name(layout, 96), std::invalid_argument);
}

TEST_CASE("figure design: pool 4 receives one transfer from clone 5's well") {
  const PoolingDesign d = figure_design();
  const TransferList list = emit_schedule(d, PlateLayout{}, 400.0);
  CHECK(list.transfers.size() == 10);  // n * k
  long to_pool4 = 0;
  for (const auto& tr : list.transfers) {
    if (tr.dest_pool == 3) {  // 0-based pool index of "pool number 4"
      ++to_pool4;
      CHECK(tr.source_plate == 0);
      CHECK(tr.source_well == 4);  // clone 5 sits in well A5
      CHECK(well_name(list.layout, tr.source_well) == "A5");
    }
  }
  CHECK(to_pool4 == 1);
}

TEST_CASE("summary equals the incidence column sums") {
  const PoolingDesign d = figure_design();
  const TransferList list = emit_schedule(d, PlateLayout{}, 400.0);
  const ScheduleSummary sum = schedule_summary(list);
  // column sums computed directly from the assignment
  std::vector<long> cols(static_cast<std::size_t>(d.v), 0);
  for (const auto& row : d.assignment)
    for (int pool : row) ++cols[static_cast<std::size_t>(pool)];
  CHECK(sum.pool_transfers == cols);
  CHECK(cols == std::vector<long>{3, 2, 2, 1, 1, 1});
  for (int pool = 0; pool < d.v; ++pool)
    CHECK(sum.pool_volume_ul[static_cast<std::size_t>(pool)] ==
          doctest::Approx(400.0 * static_cast<double>(cols[static_cast<std::size_t>(pool)])));
}

TEST_CASE("volume conservation for k-sets designs") {
  const PoolingDesign d = generate_random_ksets(200, DesignShape(30, 4), RngSeed{8});
  const TransferList list = emit_schedule(d, PlateLayout{}, 400.0);
  const ScheduleSummary sum = schedule_summary(list);
  double total = 0;
  for (double volume : sum.pool_volume_ul) total += volume;
  CHECK(total == doctest::Approx(200 * 4 * 400.0));
  CHECK(sum.total_volume_ul == doctest::Approx(total));
}

TEST_CASE("balanced packing pool volumes stay inside the balance window") {
  PackingConstraints pc;
  pc.t = 2;
  pc.balance = {{109, 111}};
  const PoolingDesign d =
      generate_ksets_packing(1298, DesignShape(47, 4), pc, RngSeed{1});
  const TransferList list = emit_schedule(d, PlateLayout{}, 400.0);
  const ScheduleSummary sum = schedule_summary(list);
  for (double volume : sum.pool_volume_ul) {
    CHECK(volume >= 109 * 400.0);  // 43.6 ml
    CHECK(volume <= 111 * 400.0);  // 44.4 ml
  }
}

TEST_CASE("transfer list reconstructs the design incidence") {
  const PoolingDesign d = generate_random_ksets(100, DesignShape(25, 3), RngSeed{4});
  const TransferList list = emit_schedule(d, PlateLayout{}, 250.0);
  CHECK(assignment_from_transfers(list) == d.assignment);
}

TEST_CASE("empty design yields an all-zero summary") {
  PoolingDesign d;
  d.v = 4;
  const TransferList list = emit_schedule(d, PlateLayout{}, 400.0);
  CHECK(list.transfers.empty());
  const ScheduleSummary sum = schedule_summary(list);
  CHECK(sum.total_volume_ul == 0);
  for (long count : sum.pool_transfers) CHECK(count == 0);
}

TEST_CASE("layout capacity is enforced") {
  const PoolingDesign d = generate_random_ksets(97, DesignShape(10, 2), RngSeed{2});
  PlateLayout one_plate;
  one_plate.plates = 1;
  CHECK_THROWS_AS(emit_schedule(d, one_plate, 400.0), std::invalid_argument);
  CHECK_THROWS_AS(emit_schedule(d, PlateLayout{}, 0.0), std::invalid_argument);
}

TEST_CASE("CSV header and well names") {
  const PoolingDesign d = figure_design();
  const TransferList list = emit_schedule(d, PlateLayout{}, 400.0);
  std::ostringstream os;
  write_transfer_csv(os, list);
  const std::string text = os.str();
  CHECK(text.rfind("source_plate,source_well,dest_pool,volume_ul\n", 0) == 0);
  CHECK(text.find("0,A1,0,400") != std::string::npos);
  CHECK(text.find("0,A5,3,400") != std::string::npos);
}

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "crawlnet/reference_tables.hpp"

using namespace crawlnet;

TEST(ReferenceTables, Shape) {
  const auto rows = reference_rows();
  ASSERT_EQ(rows.size(), 26u);
  EXPECT_EQ(std::count_if(rows.begin(), rows.end(), [](auto& r) { return r.table == 3; }), 13);
  EXPECT_EQ(rows[12].generation, 148u);
  EXPECT_EQ(rows[25].generation, 156u);
  // Servo 1 is blank in five rows of the first table and nowhere else.
  EXPECT_EQ(std::count_if(rows.begin(), rows.end(), [](auto& r) { return !r.servo1_deg; }), 5);
  EXPECT_TRUE(std::all_of(rows.begin(), rows.end(), [](auto& r) { return r.servo2_deg; }));
}

TEST(ReferenceTables, SecondTableRecoversTargetsEverywhere) {
  for (const auto& check : verify_reference_rows()) {
    if (check.row.table != 4) continue;
    EXPECT_TRUE(check.consistent()) << "generation " << check.row.generation;
    EXPECT_NEAR(*check.recovered1_deg, 90.0, 0.01);
    EXPECT_NEAR(*check.recovered2_deg, 120.0, 0.01);
  }
}

TEST(ReferenceTables, Servo2RecoversTargetInEveryRow) {
  for (const auto& check : verify_reference_rows()) {
    EXPECT_TRUE(check.servo2_ok) << check.row.table << "/" << check.row.generation;
  }
}

TEST(ReferenceTables, FinalRowOfFirstTableHasSignDiscrepancy) {
  const auto checks = verify_reference_rows();
  const auto mismatched = std::count_if(checks.begin(), checks.end(),
                                        [](const RowCheck& c) { return !c.consistent(); });
  EXPECT_EQ(mismatched, 1);

  const RowCheck& last = checks[12];
  EXPECT_FALSE(last.servo1_ok);
  EXPECT_NEAR(*last.recovered1_deg, 90.432, 1e-9);
  // Flipping the printed sign of error 1 would recover the target.
  EXPECT_NEAR(*last.row.servo1_deg - last.row.error1_deg, 90.0, 1e-9);
}

TEST(ReferenceTables, BlankCellsAreNotChecked) {
  const auto checks = verify_reference_rows();
  const RowCheck& g3 = checks[2];
  EXPECT_EQ(g3.row.generation, 3u);
  EXPECT_FALSE(g3.recovered1_deg.has_value());
  EXPECT_TRUE(g3.servo1_ok);
}

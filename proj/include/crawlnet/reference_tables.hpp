#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "crawlnet/train.hpp"

namespace crawlnet {

// One printed row of the published generation tables. Servo cells that are
// blank in the source are empty here; nothing is interpolated.
struct ReferenceRow {
  int table = 0;  // 3 or 4
  std::size_t generation = 0;
  std::optional<double> servo1_deg;
  std::optional<double> servo2_deg;
  double error1_deg = 0.0;
  double error2_deg = 0.0;
};

// The tolerance-1 run (table 3: hidden 2, lr 0.8) then the tolerance-5 run
// (table 4: hidden 2, lr 0.5), 13 rows each, values exactly as printed.
std::span<const ReferenceRow> reference_rows();

struct RowCheck {
  ReferenceRow row;
  // servo + error per servo; empty when the servo cell is blank.
  std::optional<double> recovered1_deg;
  std::optional<double> recovered2_deg;
  bool servo1_ok = true;
  bool servo2_ok = true;

  bool consistent() const { return servo1_ok && servo2_ok; }
};

// Recovers target_i = servo_i + error_i for every row and compares it with
// `expected` at the given print tolerance. Blank cells are not checked.
std::vector<RowCheck> verify_reference_rows(const AngleTargets& expected = kReferenceTargets,
                                            double tolerance_deg = 0.01);

}  // namespace crawlnet

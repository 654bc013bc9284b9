#include "crawlnet/reference_tables.hpp"

#include <array>
#include <cmath>

namespace crawlnet {

namespace {

constexpr std::optional<double> kBlank = std::nullopt;

// clang-format off
const std::array<ReferenceRow, 26> kRows{{
    {3,   1, -73.44,   -39.024, 163.44,   159.024},
    {3,   2, -69.48,   -35.064, 159.48,   155.064},
    {3,   3, kBlank,   -30.6,   154.656,  150.6},
    {3,   4, kBlank,   -27.0,   151.056,  147.0},
    {3,   5, -57.96,   -23.688, 147.96,   143.688},
    {3,  10, kBlank,   -6.984,  130.824,  126.984},
    {3,  15, kBlank,   7.92,    118.008,  112.08},
    {3,  20, kBlank,   21.6,    103.032,  98.4},
    {3,  30, 10.008,   41.832,  79.992,   78.168},
    {3,  50, 42.48,    73.656,  47.52,    46.344},
    {3,  75, 64.152,   93.744,  25.848,   26.256},
    {3, 100, 71.208,   99.144,  18.792,   20.856},
    {3, 148, 90.216,   120.384, 0.216,    -0.384},
    {4,   1, -60.264,  27.0,    150.264,  93.0},
    {4,   2, -57.168,  29.232,  147.168,  90.768},
    {4,   3, -52.632,  32.976,  142.632,  87.024},
    {4,   4, -49.176,  35.496,  139.176,  84.504},
    {4,   5, -51.912,  32.256,  141.912,  87.744},
    {4,  10, -43.272,  37.224,  133.272,  82.776},
    {4,  15, -35.424,  41.616,  125.424,  78.384},
    {4,  20, -23.904,  49.248,  113.904,  70.752},
    {4,  30, -6.984,   59.544,  96.984,   60.456},
    {4,  50, 28.584,   82.152,  61.416,   37.848},
    {4,  75, 48.6,     93.384,  41.4,     26.616},
    {4, 100, 52.992,   94.608,  37.008,   25.392},
    {4, 156, 86.616,   117.288, 3.384,    2.712},
}};
// clang-format on

}  // namespace

std::span<const ReferenceRow> reference_rows() { return kRows; }

std::vector<RowCheck> verify_reference_rows(const AngleTargets& expected, double tolerance_deg) {
  std::vector<RowCheck> checks;
  checks.reserve(kRows.size());
  for (const auto& row : kRows) {
    RowCheck check;
    check.row = row;
    if (row.servo1_deg) {
      check.recovered1_deg = *row.servo1_deg + row.error1_deg;
      check.servo1_ok = std::abs(*check.recovered1_deg - expected.servo1_deg) <= tolerance_deg;
    }
    if (row.servo2_deg) {
      check.recovered2_deg = *row.servo2_deg + row.error2_deg;
      check.servo2_ok = std::abs(*check.recovered2_deg - expected.servo2_deg) <= tolerance_deg;
    }
    checks.push_back(check);
  }
  return checks;
}

}  // namespace crawlnet

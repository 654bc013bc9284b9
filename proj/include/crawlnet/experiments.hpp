#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crawlnet/crawler_sim.hpp"
#include "crawlnet/train.hpp"

namespace crawlnet {

struct CaseSpec {
  std::string name = "custom";
  std::size_t hidden_size = 2;
  double learning_rate = 0.8;
  double tolerance_deg = 1.0;
  AngleTargets targets = kReferenceTargets;
  std::size_t repeats = 1;
  std::uint64_t base_seed = 1;
  DenormMode denorm_mode = DenormMode::kPaperStated;
  std::size_t max_generations = 20000;
  LrSchedule schedule;
  InputPolicy input_policy = InputPolicy::kFixedRandom;
};

// "case1", "case2" or "hardware-replica"; throws ConfigError otherwise.
CaseSpec preset_case(std::string_view name);

// Repeat i trains a network initialized from seed base_seed + i, with the
// same seed driving the input draws.
std::uint64_t repeat_seed(const CaseSpec& spec, std::size_t repeat);
NetworkConfig network_config(const CaseSpec& spec, std::size_t repeat);
TrainingConfig training_config(const CaseSpec& spec, std::size_t repeat);

TrainingRun run_repeat(const CaseSpec& spec, std::size_t repeat);

struct CaseResult {
  std::vector<TrainingRun> runs;  // one per repeat
  std::string table;              // paper_table() of the first repeat
};

CaseResult run_case(const CaseSpec& spec);

// Generations printed in the published tables; the final generation is
// always appended.
inline constexpr std::size_t kTableGenerations[] = {1, 2, 3, 4, 5, 10, 15, 20, 30, 50, 75, 100};

std::vector<GenerationRecord> table_rows(const TrainingRun& run);

// Tab-separated generation table, angles and errors to 3 decimals.
std::string paper_table(const TrainingRun& run);

// Sign changes of error1 between consecutive records. Zero errors carry no
// sign and are skipped.
std::size_t oscillation_count(const TrainingRun& run);

struct RepeatOutcome {
  std::size_t repeat = 0;
  bool converged = false;
  bool aborted = false;
  std::size_t generations = 0;
  std::size_t oscillations = 0;

  bool operator==(const RepeatOutcome&) const = default;
};

struct SweepResult {
  double axis_value = 0.0;
  std::vector<RepeatOutcome> repeats;
  double convergence_rate = 0.0;
  // Over converged repeats only; empty if none converged.
  std::optional<double> median_generations;
  double mean_oscillations = 0.0;

  bool operator==(const SweepResult&) const = default;
};

SweepResult summarize(double axis_value, std::span<const TrainingRun> runs);

// Every size uses the template's seeds, so sizes are compared pairwise.
std::vector<SweepResult> sweep_hidden(std::span<const std::size_t> sizes, const CaseSpec& tmpl);
std::vector<SweepResult> sweep_lr(std::span<const double> rates, const CaseSpec& tmpl);

// Output formats. CSV values use the shortest round-trip decimal form.
//   run CSV:   generation,servo1_deg,servo2_deg,error1_deg,error2_deg,cost,lr_used
//   plot CSV:  generation,error1_deg,error2_deg
//   sweep CSV: axis_value,repeat,converged,generations,oscillations
//   trajectory CSV: generation,x,y,heading
// Run and plot CSVs open with a "# denorm_mode=<mode>" comment line.
enum class EmitFormat { kRunCsv, kPaperTable, kPlotCsv };

void write_run(std::ostream& out, const TrainingRun& run, EmitFormat format);
void write_sweep_csv(std::ostream& out, std::span<const SweepResult> sweep);
void write_trajectory_csv(std::ostream& out, std::span<const BodyPose> trajectory);

// File variants; IoError names the path on failure.
void emit(const TrainingRun& run, EmitFormat format, const std::filesystem::path& path);
void emit(std::span<const SweepResult> sweep, const std::filesystem::path& path);

// Parses a run CSV back into records. Throws ParseError with the line number.
std::vector<GenerationRecord> read_run_csv(std::istream& in);

std::string format_double(double v);

}  // namespace crawlnet

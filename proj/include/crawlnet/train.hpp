#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crawlnet/net.hpp"

namespace crawlnet {

// A pair of servo angles in degrees (servo 1 drives the shoulder, servo 2
// the elbow). Also used for signed per-servo errors.
struct ServoAngles {
  double servo1_deg = 0.0;
  double servo2_deg = 0.0;

  bool operator==(const ServoAngles&) const = default;
};

// The "estimated required" angles that define zero error.
using AngleTargets = ServoAngles;

inline constexpr AngleTargets kReferenceTargets{90.0, 120.0};

struct LrSchedule {
  enum class Kind { kConstant, kExponentialDecay, kStepDecay };

  Kind kind = Kind::kConstant;
  double factor = 1.0;       // decay factor in (0, 1]
  std::size_t every = 1;     // step length in generations (StepDecay only)

  static LrSchedule constant() { return {}; }
  static LrSchedule exponential(double factor) { return {Kind::kExponentialDecay, factor, 1}; }
  static LrSchedule step(double factor, std::size_t every) {
    return {Kind::kStepDecay, factor, every};
  }

  bool operator==(const LrSchedule&) const = default;
};

// "constant", "exp:<factor>" or "step:<factor>:<every>".
LrSchedule parse_schedule(std::string_view text);
std::string to_string(const LrSchedule& schedule);

enum class InputPolicy {
  kFixedRandom,            // one uniform [0,1) draw before the first generation
  kResamplePerGeneration,  // a fresh draw every generation
};

std::string_view to_string(InputPolicy policy);
InputPolicy parse_input_policy(std::string_view text);

struct TrainingConfig {
  double learning_rate = 0.8;
  LrSchedule schedule;
  double tolerance_deg = 1.0;
  std::size_t max_generations = 20000;
  InputPolicy input_policy = InputPolicy::kFixedRandom;
  DenormMode denorm_mode = DenormMode::kPaperStated;
  std::uint64_t seed = 0;

  bool operator==(const TrainingConfig&) const = default;
};

void validate(const TrainingConfig& config);

// One row of a generation table.
struct GenerationRecord {
  std::size_t generation = 0;
  double servo1_deg = 0.0;
  double servo2_deg = 0.0;
  double error1_deg = 0.0;
  double error2_deg = 0.0;
  double cost = 0.0;
  double lr_used = 0.0;

  bool operator==(const GenerationRecord&) const = default;
};

struct TrainingRun {
  std::vector<GenerationRecord> records;
  Network final_network;
  bool converged = false;
  std::size_t generations_used = 0;
  TrainingConfig config;
  AngleTargets targets;
  // Input fed to the network in the last recorded generation.
  double last_input = 0.0;
  // Set when the run stopped on a non-finite value.
  std::optional<std::string> abort_reason;

  bool operator==(const TrainingRun&) const = default;
};

// (target - angle) per servo.
ServoAngles angle_error(const AngleTargets& targets, const ServoAngles& angles);

using OutputPair = std::array<double, kOutputSize>;

// Half the summed squared difference between normalized targets and outputs.
double cost(const OutputPair& targets_norm, const OutputPair& outputs);

struct BackpropResult {
  Network updated;
  // d(cost)/d(parameter), in Network::flatten() order.
  std::vector<double> gradient;
};

// One online gradient-descent step on cost() for a single sample.
BackpropResult backprop_update(const Network& net, double input,
                               const OutputPair& targets_norm, double lr);

// Central-difference gradient of cost(), perturbing one parameter at a time.
// Shares no code with backprop_update beyond feedforward().
std::vector<double> finite_diff_gradient(const Network& net, double input,
                                         const OutputPair& targets_norm, double h);

double schedule_lr(const TrainingConfig& config, std::size_t generation);

// Runs the generation loop until both angle errors are within tolerance or
// max_generations records have been produced. Never throws on divergence;
// a non-finite parameter ends the run with abort_reason set.
TrainingRun train(Network net, const TrainingConfig& config, const AngleTargets& targets);

}  // namespace crawlnet

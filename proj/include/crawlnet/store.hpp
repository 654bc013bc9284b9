#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "crawlnet/net.hpp"
#include "crawlnet/train.hpp"

namespace crawlnet {

inline constexpr int kModelFormatVersion = 1;

struct ModelMetadata {
  AngleTargets targets = kReferenceTargets;
  double tolerance_deg = 1.0;
  double learning_rate = 0.8;
  std::size_t generations_used = 0;
  DenormMode denorm_mode = DenormMode::kPaperStated;
  std::uint64_t seed = 0;
  // Value on the input neuron when training stopped.
  double input = 0.0;

  bool operator==(const ModelMetadata&) const = default;
};

ModelMetadata metadata_from(const TrainingRun& run);

struct LoadedModel {
  Network network;
  ModelMetadata metadata;
};

/// Model file, one "key values..." record per line, in this fixed order:
///
///   crawlnet-model 1
///   input_size 1
///   hidden_size <H>
///   output_size 2
///   seed <u64>
///   denorm_mode paper-stated|table-affine
///   targets_deg <servo1> <servo2>
///   tolerance_deg <x>
///   learning_rate <x>
///   generations_used <n>
///   input <x>
///   w_ih <H values>
///   w_ho <2H values, output-major>
///   b_h <H values>
///   b_o <2 values>
///
/// Reals use the shortest decimal form that parses back to the same double.
std::string serialize_model(const Network& net, const ModelMetadata& metadata);
LoadedModel parse_model(std::string_view text);

// Writes to a sibling temp file and renames it over `path`. Refuses
// non-finite values. On failure no file is left behind.
void save_model(const Network& net, const ModelMetadata& metadata,
                const std::filesystem::path& path);
LoadedModel load_model(const std::filesystem::path& path);

}  // namespace crawlnet

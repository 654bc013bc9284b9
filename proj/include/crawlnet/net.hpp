#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "crawlnet/rng.hpp"

namespace crawlnet {

inline constexpr std::size_t kInputSize = 1;
inline constexpr std::size_t kOutputSize = 2;

struct NetworkConfig {
  std::size_t input_size = kInputSize;
  std::size_t hidden_size = 2;
  std::size_t output_size = kOutputSize;
  std::uint64_t seed = 0;
};

// Throws ConfigError unless input_size == 1, output_size == 2 and
// hidden_size >= 1.
void validate(const NetworkConfig& config);

/// Single-hidden-layer feedforward network with one input and two outputs.
///
/// Parameter layout (used by gradients and by the model file):
///   w_ih  [hidden x 1]  input->hidden weights, row-major
///   w_ho  [2 x hidden]  hidden->output weights, row-major (output-major)
///   b_h   [hidden]      hidden biases
///   b_o   [2]           output biases
struct Network {
  std::vector<double> w_ih;
  std::vector<double> w_ho;
  std::vector<double> b_h;
  std::vector<double> b_o;

  static Network zeros(std::size_t hidden_size);

  std::size_t hidden_size() const { return b_h.size(); }
  double& weight_ho(std::size_t out, std::size_t hidden) {
    return w_ho[out * hidden_size() + hidden];
  }
  double weight_ho(std::size_t out, std::size_t hidden) const {
    return w_ho[out * hidden_size() + hidden];
  }

  // hidden + 2*hidden + hidden + 2
  std::size_t parameter_count() const;

  // Concatenation w_ih, w_ho, b_h, b_o.
  std::vector<double> flatten() const;
  // Inverse of flatten(); throws ConfigError on a size mismatch.
  void assign(std::span<const double> params);

  bool all_finite() const;

  bool operator==(const Network&) const = default;
};

struct ForwardTrace {
  double input = 0.0;
  std::vector<double> hidden_pre;
  std::vector<double> hidden_out;
  std::vector<double> output_pre;
  std::array<double, kOutputSize> output{};
};

// Binary sigmoid 1/(1+e^-x). Only e^-|x| is ever evaluated.
double sigmoid(double x);

// Weights and biases i.i.d. uniform on [-1, 1].
Network init_network(const NetworkConfig& config, Rng& rng);
// Same, drawing from Rng(config.seed).
Network init_network(const NetworkConfig& config);

ForwardTrace feedforward(const Network& net, double input);

enum class DenormMode {
  kPaperStated,  // y = 180 x, angles in [0, 180]
  kTableAffine,  // y = 360 x - 180, angles in [-180, 180]
};

std::string_view to_string(DenormMode mode);
// Accepts "paper-stated" and "table-affine"; throws ConfigError otherwise.
DenormMode parse_denorm_mode(std::string_view text);

struct AngleRange {
  double lo_deg;
  double hi_deg;
  double span() const { return hi_deg - lo_deg; }
  bool contains(double deg) const { return deg >= lo_deg && deg <= hi_deg; }
};

AngleRange angle_range(DenormMode mode);

// Degrees -> [0, 1]. Throws RangeError outside angle_range(mode).
double normalize(double angle_deg, DenormMode mode);
// [0, 1] -> degrees. Throws RangeError for x outside [0, 1].
double denormalize(double x, DenormMode mode);

}  // namespace crawlnet

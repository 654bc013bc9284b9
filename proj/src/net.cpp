#include "crawlnet/net.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "crawlnet/errors.hpp"

namespace crawlnet {

void validate(const NetworkConfig& config) {
  if (config.input_size != kInputSize) {
    throw ConfigError("input_size must be 1, got " + std::to_string(config.input_size));
  }
  if (config.output_size != kOutputSize) {
    throw ConfigError("output_size must be 2, got " + std::to_string(config.output_size));
  }
  if (config.hidden_size == 0) {
    throw ConfigError("hidden_size must be at least 1");
  }
}

Network Network::zeros(std::size_t hidden_size) {
  Network net;
  net.w_ih.assign(hidden_size * kInputSize, 0.0);
  net.w_ho.assign(kOutputSize * hidden_size, 0.0);
  net.b_h.assign(hidden_size, 0.0);
  net.b_o.assign(kOutputSize, 0.0);
  return net;
}

std::size_t Network::parameter_count() const {
  return w_ih.size() + w_ho.size() + b_h.size() + b_o.size();
}

std::vector<double> Network::flatten() const {
  std::vector<double> out;
  out.reserve(parameter_count());
  out.insert(out.end(), w_ih.begin(), w_ih.end());
  out.insert(out.end(), w_ho.begin(), w_ho.end());
  out.insert(out.end(), b_h.begin(), b_h.end());
  out.insert(out.end(), b_o.begin(), b_o.end());
  return out;
}

void Network::assign(std::span<const double> params) {
  if (params.size() != parameter_count()) {
    throw ConfigError("parameter vector has " + std::to_string(params.size()) +
                      " entries, network has " + std::to_string(parameter_count()));
  }
  auto it = params.begin();
  for (auto* block : {&w_ih, &w_ho, &b_h, &b_o}) {
    std::copy_n(it, block->size(), block->begin());
    it += static_cast<std::ptrdiff_t>(block->size());
  }
}

bool Network::all_finite() const {
  const auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  return finite(w_ih) && finite(w_ho) && finite(b_h) && finite(b_o);
}

double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Network init_network(const NetworkConfig& config, Rng& rng) {
  validate(config);
  Network net = Network::zeros(config.hidden_size);
  for (auto* block : {&net.w_ih, &net.w_ho, &net.b_h, &net.b_o}) {
    for (double& v : *block) v = rng.uniform(-1.0, 1.0);
  }
  return net;
}

Network init_network(const NetworkConfig& config) {
  Rng rng(config.seed);
  return init_network(config, rng);
}

ForwardTrace feedforward(const Network& net, double input) {
  const std::size_t hidden = net.hidden_size();
  ForwardTrace trace;
  trace.input = input;
  trace.hidden_pre.resize(hidden);
  trace.hidden_out.resize(hidden);
  for (std::size_t j = 0; j < hidden; ++j) {
    trace.hidden_pre[j] = net.w_ih[j] * input + net.b_h[j];
    trace.hidden_out[j] = sigmoid(trace.hidden_pre[j]);
  }
  trace.output_pre.resize(kOutputSize);
  for (std::size_t i = 0; i < kOutputSize; ++i) {
    double sum = net.b_o[i];
    for (std::size_t j = 0; j < hidden; ++j) {
      sum += net.weight_ho(i, j) * trace.hidden_out[j];
    }
    trace.output_pre[i] = sum;
    trace.output[i] = sigmoid(sum);
  }
  return trace;
}

std::string_view to_string(DenormMode mode) {
  switch (mode) {
    case DenormMode::kPaperStated:
      return "paper-stated";
    case DenormMode::kTableAffine:
      return "table-affine";
  }
  return "unknown";
}

DenormMode parse_denorm_mode(std::string_view text) {
  if (text == "paper-stated") return DenormMode::kPaperStated;
  if (text == "table-affine") return DenormMode::kTableAffine;
  throw ConfigError("unknown denormalization mode '" + std::string(text) +
                    "' (expected paper-stated or table-affine)");
}

AngleRange angle_range(DenormMode mode) {
  if (mode == DenormMode::kTableAffine) return {-180.0, 180.0};
  return {0.0, 180.0};
}

double normalize(double angle_deg, DenormMode mode) {
  const AngleRange range = angle_range(mode);
  if (!std::isfinite(angle_deg) || !range.contains(angle_deg)) {
    throw RangeError("angle " + std::to_string(angle_deg) + " deg outside [" +
                     std::to_string(range.lo_deg) + ", " + std::to_string(range.hi_deg) +
                     "] for mode " + std::string(to_string(mode)));
  }
  if (mode == DenormMode::kTableAffine) return (angle_deg + 180.0) / 360.0;
  return angle_deg / 180.0;
}

double denormalize(double x, DenormMode mode) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw RangeError("normalized value " + std::to_string(x) + " outside [0, 1]");
  }
  if (mode == DenormMode::kTableAffine) return 360.0 * x - 180.0;
  return 180.0 * x;
}

}  // namespace crawlnet

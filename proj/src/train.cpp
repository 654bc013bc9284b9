#include "crawlnet/train.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "crawlnet/errors.hpp"

namespace crawlnet {

namespace {

double parse_double(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("invalid " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

std::string format_shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

LrSchedule parse_schedule(std::string_view text) {
  if (text == "constant") return LrSchedule::constant();

  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto colon = text.find(':', start);
    parts.push_back(text.substr(start, colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }

  LrSchedule schedule;
  if (parts[0] == "exp" && parts.size() == 2) {
    schedule = LrSchedule::exponential(parse_double(parts[1], "decay factor"));
  } else if (parts[0] == "step" && parts.size() == 3) {
    const double every = parse_double(parts[2], "step length");
    if (every < 1.0 || every != std::floor(every)) {
      throw ConfigError("step length must be a positive integer");
    }
    schedule = LrSchedule::step(parse_double(parts[1], "decay factor"),
                                static_cast<std::size_t>(every));
  } else {
    throw ConfigError("unknown schedule '" + std::string(text) +
                      "' (expected constant, exp:<f> or step:<f>:<n>)");
  }
  if (!(schedule.factor > 0.0 && schedule.factor <= 1.0)) {
    throw ConfigError("decay factor must lie in (0, 1]");
  }
  return schedule;
}

std::string to_string(const LrSchedule& schedule) {
  switch (schedule.kind) {
    case LrSchedule::Kind::kConstant:
      return "constant";
    case LrSchedule::Kind::kExponentialDecay:
      return "exp:" + format_shortest(schedule.factor);
    case LrSchedule::Kind::kStepDecay:
      return "step:" + format_shortest(schedule.factor) + ":" + std::to_string(schedule.every);
  }
  return "unknown";
}

std::string_view to_string(InputPolicy policy) {
  return policy == InputPolicy::kFixedRandom ? "fixed" : "resample";
}

InputPolicy parse_input_policy(std::string_view text) {
  if (text == "fixed") return InputPolicy::kFixedRandom;
  if (text == "resample") return InputPolicy::kResamplePerGeneration;
  throw ConfigError("unknown input policy '" + std::string(text) +
                    "' (expected fixed or resample)");
}

void validate(const TrainingConfig& config) {
  if (!(config.learning_rate > 0.0) || !std::isfinite(config.learning_rate)) {
    throw ConfigError("learning rate must be positive");
  }
  if (!(config.tolerance_deg > 0.0) || !std::isfinite(config.tolerance_deg)) {
    throw ConfigError("tolerance must be positive");
  }
  if (config.max_generations < 1) {
    throw ConfigError("max_generations must be at least 1");
  }
  const auto& s = config.schedule;
  if (s.kind != LrSchedule::Kind::kConstant && !(s.factor > 0.0 && s.factor <= 1.0)) {
    throw ConfigError("decay factor must lie in (0, 1]");
  }
  if (s.kind == LrSchedule::Kind::kStepDecay && s.every < 1) {
    throw ConfigError("step length must be at least 1");
  }
}

ServoAngles angle_error(const AngleTargets& targets, const ServoAngles& angles) {
  return {targets.servo1_deg - angles.servo1_deg, targets.servo2_deg - angles.servo2_deg};
}

double cost(const OutputPair& targets_norm, const OutputPair& outputs) {
  double sum = 0.0;
  for (std::size_t i = 0; i < kOutputSize; ++i) {
    const double diff = targets_norm[i] - outputs[i];
    sum += diff * diff;
  }
  return 0.5 * sum;
}

BackpropResult backprop_update(const Network& net, double input,
                               const OutputPair& targets_norm, double lr) {
  const std::size_t hidden = net.hidden_size();
  const ForwardTrace trace = feedforward(net, input);

  Network grad = Network::zeros(hidden);

  std::array<double, kOutputSize> output_delta{};
  for (std::size_t i = 0; i < kOutputSize; ++i) {
    const double o = trace.output[i];
    output_delta[i] = (o - targets_norm[i]) * o * (1.0 - o);
    grad.b_o[i] = output_delta[i];
    for (std::size_t j = 0; j < hidden; ++j) {
      grad.weight_ho(i, j) = output_delta[i] * trace.hidden_out[j];
    }
  }

  // Hidden deltas use the pre-update hidden->output weights.
  for (std::size_t j = 0; j < hidden; ++j) {
    double back = 0.0;
    for (std::size_t i = 0; i < kOutputSize; ++i) {
      back += net.weight_ho(i, j) * output_delta[i];
    }
    const double h = trace.hidden_out[j];
    const double delta = back * h * (1.0 - h);
    grad.b_h[j] = delta;
    grad.w_ih[j] = delta * input;
  }

  BackpropResult result{net, grad.flatten()};
  std::vector<double> params = result.updated.flatten();
  for (std::size_t k = 0; k < params.size(); ++k) {
    params[k] -= lr * result.gradient[k];
  }
  result.updated.assign(params);
  return result;
}

std::vector<double> finite_diff_gradient(const Network& net, double input,
                                         const OutputPair& targets_norm, double h) {
  if (!(h > 0.0)) throw ConfigError("finite-difference step must be positive");

  Network probe = net;
  std::vector<double> params = net.flatten();
  std::vector<double> grad(params.size());
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double original = params[k];

    params[k] = original + h;
    probe.assign(params);
    const double plus = cost(targets_norm, feedforward(probe, input).output);

    params[k] = original - h;
    probe.assign(params);
    const double minus = cost(targets_norm, feedforward(probe, input).output);

    params[k] = original;
    grad[k] = (plus - minus) / (2.0 * h);
  }
  return grad;
}

double schedule_lr(const TrainingConfig& config, std::size_t generation) {
  if (generation < 1) throw ConfigError("generation numbering starts at 1");
  const auto& s = config.schedule;
  double decay = 1.0;
  switch (s.kind) {
    case LrSchedule::Kind::kConstant:
      break;
    case LrSchedule::Kind::kExponentialDecay:
      decay = std::pow(s.factor, static_cast<double>(generation - 1));
      break;
    case LrSchedule::Kind::kStepDecay:
      decay = std::pow(s.factor, static_cast<double>((generation - 1) / s.every));
      break;
  }
  // Long decays underflow; the rate stays strictly positive.
  return std::max(config.learning_rate * decay, std::numeric_limits<double>::min());
}

TrainingRun train(Network net, const TrainingConfig& config, const AngleTargets& targets) {
  validate(config);
  const AngleRange range = angle_range(config.denorm_mode);
  if (!range.contains(targets.servo1_deg) || !range.contains(targets.servo2_deg)) {
    throw RangeError("targets outside the " + std::string(to_string(config.denorm_mode)) +
                     " angle range");
  }
  const OutputPair targets_norm{normalize(targets.servo1_deg, config.denorm_mode),
                                normalize(targets.servo2_deg, config.denorm_mode)};

  TrainingRun run;
  run.config = config;
  run.targets = targets;
  run.records.reserve(std::min<std::size_t>(config.max_generations, 4096));

  Rng rng(config.seed);
  double input = rng.uniform01();

  if (!net.all_finite()) {
    run.abort_reason = "initial network has non-finite parameters";
    run.final_network = std::move(net);
    return run;
  }

  for (std::size_t generation = 1; generation <= config.max_generations; ++generation) {
    if (config.input_policy == InputPolicy::kResamplePerGeneration && generation > 1) {
      input = rng.uniform01();
    }
    const double lr = schedule_lr(config, generation);
    const ForwardTrace trace = feedforward(net, input);
    if (!std::isfinite(trace.output[0]) || !std::isfinite(trace.output[1])) {
      run.abort_reason = "non-finite network output at generation " + std::to_string(generation);
      break;
    }

    const ServoAngles angles{denormalize(trace.output[0], config.denorm_mode),
                             denormalize(trace.output[1], config.denorm_mode)};
    const ServoAngles error = angle_error(targets, angles);
    run.records.push_back({generation, angles.servo1_deg, angles.servo2_deg, error.servo1_deg,
                           error.servo2_deg, cost(targets_norm, trace.output), lr});
    run.last_input = input;

    if (std::abs(error.servo1_deg) <= config.tolerance_deg &&
        std::abs(error.servo2_deg) <= config.tolerance_deg) {
      run.converged = true;
      break;
    }
    if (generation == config.max_generations) break;

    net = backprop_update(net, input, targets_norm, lr).updated;
    if (!net.all_finite()) {
      std::ostringstream msg;
      msg << "non-finite parameter after the update of generation " << generation
          << " (lr " << lr << ")";
      run.abort_reason = msg.str();
      break;
    }
  }

  run.generations_used = run.records.size();
  run.final_network = std::move(net);
  return run;
}

}  // namespace crawlnet

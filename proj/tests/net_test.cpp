#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "crawlnet/errors.hpp"
#include "crawlnet/net.hpp"

using namespace crawlnet;

namespace {

Network random_network(std::size_t hidden, std::uint64_t seed) {
  NetworkConfig config;
  config.hidden_size = hidden;
  config.seed = seed;
  return init_network(config);
}

}  // namespace

TEST(Sigmoid, KnownValues) {
  EXPECT_EQ(sigmoid(0.0), 0.5);
  // 1/(1+e^-1) evaluated at 40 digits with mpmath.
  EXPECT_NEAR(sigmoid(1.0), 0.7310585786300048792511592418218362743651, 1e-15);
  EXPECT_NEAR(sigmoid(-3.7), 1.0 - sigmoid(3.7), 1e-15);
}

TEST(Sigmoid, StableAtExtremes) {
  for (double x : {-1000.0, -745.0, -500.0, 500.0, 745.0, 1000.0}) {
    const double s = sigmoid(x);
    EXPECT_TRUE(std::isfinite(s)) << x;
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
  }
  EXPECT_NEAR(sigmoid(500.0), 1.0, 1e-15);
  EXPECT_NEAR(sigmoid(-500.0), 0.0, 1e-200);
  EXPECT_GT(sigmoid(-500.0), 0.0);
}

TEST(Sigmoid, Monotone) {
  double previous = 0.0;
  for (double x = -30.0; x <= 30.0; x += 0.125) {
    const double s = sigmoid(x);
    EXPECT_GT(s, previous) << x;
    previous = s;
  }
}

TEST(NetworkConfig, RejectsBadShapes) {
  EXPECT_THROW(validate(NetworkConfig{1, 0, 2, 1}), ConfigError);
  EXPECT_THROW(validate(NetworkConfig{2, 3, 2, 1}), ConfigError);
  EXPECT_THROW(validate(NetworkConfig{1, 3, 1, 1}), ConfigError);
  EXPECT_NO_THROW(validate(NetworkConfig{1, 3, 2, 1}));
}

TEST(InitNetwork, DeterministicBySeed) {
  EXPECT_EQ(random_network(2, 42), random_network(2, 42));
  EXPECT_NE(random_network(2, 42), random_network(2, 43));
}

TEST(InitNetwork, WeightsWithinUnitBox) {
  const Network net = random_network(20, 7);
  ASSERT_EQ(net.w_ih.size() + net.w_ho.size(), 60u);
  ASSERT_EQ(net.parameter_count(), 20u + 40u + 20u + 2u);
  for (double w : net.flatten()) {
    EXPECT_GE(w, -1.0);
    EXPECT_LE(w, 1.0);
  }
}

TEST(InitNetwork, RejectsZeroHidden) {
  NetworkConfig config;
  config.hidden_size = 0;
  config.seed = 1;
  EXPECT_THROW(init_network(config), ConfigError);
}

TEST(Network, FlattenOrderAndAssign) {
  Network net = Network::zeros(2);
  net.w_ih = {1, 2};
  net.w_ho = {3, 4, 5, 6};
  net.b_h = {7, 8};
  net.b_o = {9, 10};
  EXPECT_EQ(net.flatten(), (std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10}));
  EXPECT_EQ(net.weight_ho(1, 0), 5.0);

  Network copy = Network::zeros(2);
  copy.assign(net.flatten());
  EXPECT_EQ(copy, net);
  EXPECT_THROW(copy.assign(std::vector<double>(9, 0.0)), ConfigError);
}

TEST(Feedforward, ZeroNetworkGivesHalf) {
  const Network net = Network::zeros(3);
  for (double input : {-2.0, 0.0, 0.37, 5.0}) {
    const auto trace = feedforward(net, input);
    EXPECT_EQ(trace.output[0], 0.5);
    EXPECT_EQ(trace.output[1], 0.5);
  }
}

TEST(Feedforward, SingleHiddenHandEvaluation) {
  Network net = Network::zeros(1);
  net.w_ih = {1.0};
  net.w_ho = {1.0, 1.0};
  const auto trace = feedforward(net, 0.0);
  EXPECT_EQ(trace.hidden_out[0], 0.5);
  // sigma(0.5) from the mpmath oracle.
  EXPECT_NEAR(trace.output[0], 0.6224593312018545646389005657455084787533, 1e-15);
  EXPECT_NEAR(trace.output[1], 0.6224593312018545646389005657455084787533, 1e-15);
}

TEST(Feedforward, TraceInvariantsOnRandomNetworks) {
  Rng inputs(99);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Network net = random_network(1 + seed % 25, seed);
    const double input = inputs.uniform(-3.0, 3.0);
    const auto trace = feedforward(net, input);
    EXPECT_EQ(trace.input, input);
    for (std::size_t j = 0; j < net.hidden_size(); ++j) {
      EXPECT_EQ(trace.hidden_pre[j], net.w_ih[j] * input + net.b_h[j]);
      EXPECT_EQ(trace.hidden_out[j], sigmoid(trace.hidden_pre[j]));
      EXPECT_GT(trace.hidden_out[j], 0.0);
      EXPECT_LT(trace.hidden_out[j], 1.0);
    }
    for (std::size_t i = 0; i < kOutputSize; ++i) {
      EXPECT_EQ(trace.output[i], sigmoid(trace.output_pre[i]));
      EXPECT_GT(trace.output[i], 0.0);
      EXPECT_LT(trace.output[i], 1.0);
    }
    const auto again = feedforward(net, input);
    EXPECT_EQ(again.output, trace.output);
    EXPECT_EQ(again.hidden_out, trace.hidden_out);
  }
}

TEST(Feedforward, OutputIncreasesWithHiddenToOutputWeight) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Network net = random_network(4, seed);
    const std::size_t out = seed % 2;
    const std::size_t hidden = seed % 4;
    const double before = feedforward(net, 0.4).output[out];
    net.weight_ho(out, hidden) += 0.25;
    const auto after = feedforward(net, 0.4);
    EXPECT_GT(after.output[out], before);
    EXPECT_EQ(after.output[1 - out], feedforward(random_network(4, seed), 0.4).output[1 - out]);
  }
}

TEST(Normalization, PaperStatedMode) {
  EXPECT_EQ(normalize(90.0, DenormMode::kPaperStated), 0.5);
  EXPECT_EQ(normalize(180.0, DenormMode::kPaperStated), 1.0);
  EXPECT_EQ(denormalize(0.5, DenormMode::kPaperStated), 90.0);
  EXPECT_EQ(denormalize(1.0, DenormMode::kPaperStated), 180.0);
  EXPECT_THROW(normalize(-0.1, DenormMode::kPaperStated), RangeError);
  EXPECT_THROW(normalize(180.5, DenormMode::kPaperStated), RangeError);
}

TEST(Normalization, TableAffineMode) {
  EXPECT_NEAR(normalize(-73.44, DenormMode::kTableAffine), 0.296, 1e-15);
  EXPECT_NEAR(denormalize(0.7506, DenormMode::kTableAffine), 90.216, 1e-12);
  EXPECT_EQ(normalize(-180.0, DenormMode::kTableAffine), 0.0);
  EXPECT_THROW(normalize(-180.01, DenormMode::kTableAffine), RangeError);
}

TEST(Normalization, DenormalizeRejectsOutOfUnitInterval) {
  for (auto mode : {DenormMode::kPaperStated, DenormMode::kTableAffine}) {
    EXPECT_THROW(denormalize(-1e-9, mode), RangeError);
    EXPECT_THROW(denormalize(1.0 + 1e-9, mode), RangeError);
    EXPECT_THROW(denormalize(std::numeric_limits<double>::quiet_NaN(), mode), RangeError);
  }
}

TEST(Normalization, RoundTripProperty) {
  Rng rng(2024);
  for (auto mode : {DenormMode::kPaperStated, DenormMode::kTableAffine}) {
    for (int k = 0; k < 10000; ++k) {
      const double x = k == 0 ? 0.0 : k == 1 ? 1.0 : rng.uniform01();
      EXPECT_NEAR(normalize(denormalize(x, mode), mode), x, 1e-12);
    }
  }
}

TEST(DenormMode, NamesRoundTrip) {
  for (auto mode : {DenormMode::kPaperStated, DenormMode::kTableAffine}) {
    EXPECT_EQ(parse_denorm_mode(to_string(mode)), mode);
  }
  EXPECT_THROW(parse_denorm_mode("degrees"), ConfigError);
}

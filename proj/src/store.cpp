#include "crawlnet/store.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <system_error>
#include <vector>

#include <unistd.h>

#include "crawlnet/errors.hpp"

namespace crawlnet {

namespace {

constexpr std::string_view kMagic = "crawlnet-model";

std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void append_values(std::string& out, std::string_view key, const std::vector<double>& values) {
  out += key;
  for (double v : values) {
    out += ' ';
    out += shortest(v);
  }
  out += '\n';
}

// Splits the text into lines and hands out "key values..." records in order.
class LineReader {
 public:
  explicit LineReader(std::string_view text) {
    std::size_t start = 0;
    while (start < text.size()) {
      auto end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = text.substr(start, end - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      lines_.push_back(line);
      start = end + 1;
    }
  }

  // Tokens of the next line, which must start with `key`.
  std::vector<std::string_view> expect(std::string_view key) {
    ++line_no_;
    if (line_no_ > lines_.size()) {
      fail("expected '" + std::string(key) + "', found end of file");
    }
    std::vector<std::string_view> tokens;
    std::string_view line = lines_[line_no_ - 1];
    std::size_t pos = 0;
    while (pos < line.size()) {
      const auto begin = line.find_first_not_of(' ', pos);
      if (begin == std::string_view::npos) break;
      auto end = line.find(' ', begin);
      if (end == std::string_view::npos) end = line.size();
      tokens.push_back(line.substr(begin, end - begin));
      pos = end;
    }
    if (tokens.empty() || tokens.front() != key) {
      fail("expected '" + std::string(key) + "'");
    }
    tokens.erase(tokens.begin());
    return tokens;
  }

  std::vector<std::string_view> expect(std::string_view key, std::size_t count) {
    auto values = expect(key);
    if (values.size() != count) {
      fail("'" + std::string(key) + "' has " + std::to_string(values.size()) +
           " values, expected " + std::to_string(count));
    }
    return values;
  }

  double real(std::string_view token) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v)) {
      fail("bad number '" + std::string(token) + "'");
    }
    return v;
  }

  std::uint64_t count(std::string_view token) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      fail("bad integer '" + std::string(token) + "'");
    }
    return v;
  }

  void reals(std::string_view key, std::vector<double>& into) {
    const auto tokens = expect(key, into.size());
    for (std::size_t k = 0; k < into.size(); ++k) into[k] = real(tokens[k]);
  }

  void expect_end() {
    for (std::size_t k = line_no_; k < lines_.size(); ++k) {
      if (!lines_[k].empty()) {
        line_no_ = k + 1;
        fail("unexpected trailing content");
      }
    }
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("model file line " + std::to_string(line_no_) + ": " + what);
  }

 private:
  std::vector<std::string_view> lines_;
  std::size_t line_no_ = 0;
};

}  // namespace

ModelMetadata metadata_from(const TrainingRun& run) {
  ModelMetadata meta;
  meta.targets = run.targets;
  meta.tolerance_deg = run.config.tolerance_deg;
  meta.learning_rate = run.config.learning_rate;
  meta.generations_used = run.generations_used;
  meta.denorm_mode = run.config.denorm_mode;
  meta.seed = run.config.seed;
  meta.input = run.last_input;
  return meta;
}

std::string serialize_model(const Network& net, const ModelMetadata& metadata) {
  const std::size_t hidden = net.hidden_size();
  if (hidden == 0 || net.w_ih.size() != hidden || net.w_ho.size() != kOutputSize * hidden ||
      net.b_o.size() != kOutputSize) {
    throw ConfigError("network arrays do not match a 1-H-2 layout");
  }
  if (!net.all_finite()) {
    throw ConfigError("refusing to save a network with non-finite weights or biases");
  }
  const double meta_reals[] = {metadata.targets.servo1_deg, metadata.targets.servo2_deg,
                               metadata.tolerance_deg, metadata.learning_rate, metadata.input};
  for (double v : meta_reals) {
    if (!std::isfinite(v)) throw ConfigError("refusing to save non-finite metadata");
  }

  std::string out;
  out += std::string(kMagic) + ' ' + std::to_string(kModelFormatVersion) + '\n';
  out += "input_size " + std::to_string(kInputSize) + '\n';
  out += "hidden_size " + std::to_string(hidden) + '\n';
  out += "output_size " + std::to_string(kOutputSize) + '\n';
  out += "seed " + std::to_string(metadata.seed) + '\n';
  out += "denorm_mode " + std::string(to_string(metadata.denorm_mode)) + '\n';
  out += "targets_deg " + shortest(metadata.targets.servo1_deg) + ' ' +
         shortest(metadata.targets.servo2_deg) + '\n';
  out += "tolerance_deg " + shortest(metadata.tolerance_deg) + '\n';
  out += "learning_rate " + shortest(metadata.learning_rate) + '\n';
  out += "generations_used " + std::to_string(metadata.generations_used) + '\n';
  out += "input " + shortest(metadata.input) + '\n';
  append_values(out, "w_ih", net.w_ih);
  append_values(out, "w_ho", net.w_ho);
  append_values(out, "b_h", net.b_h);
  append_values(out, "b_o", net.b_o);
  return out;
}

LoadedModel parse_model(std::string_view text) {
  LineReader reader(text);

  const auto version = reader.count(reader.expect(kMagic, 1)[0]);
  if (version != static_cast<std::uint64_t>(kModelFormatVersion)) {
    reader.fail("unsupported format_version " + std::to_string(version));
  }

  NetworkConfig config;
  config.input_size = reader.count(reader.expect("input_size", 1)[0]);
  config.hidden_size = reader.count(reader.expect("hidden_size", 1)[0]);
  config.output_size = reader.count(reader.expect("output_size", 1)[0]);
  try {
    validate(config);
  } catch (const ConfigError& e) {
    reader.fail(e.what());
  }

  LoadedModel model;
  auto& meta = model.metadata;
  meta.seed = reader.count(reader.expect("seed", 1)[0]);
  try {
    meta.denorm_mode = parse_denorm_mode(reader.expect("denorm_mode", 1)[0]);
  } catch (const ConfigError& e) {
    reader.fail(e.what());
  }
  const auto targets = reader.expect("targets_deg", 2);
  meta.targets = {reader.real(targets[0]), reader.real(targets[1])};
  meta.tolerance_deg = reader.real(reader.expect("tolerance_deg", 1)[0]);
  meta.learning_rate = reader.real(reader.expect("learning_rate", 1)[0]);
  meta.generations_used = reader.count(reader.expect("generations_used", 1)[0]);
  meta.input = reader.real(reader.expect("input", 1)[0]);

  model.network = Network::zeros(config.hidden_size);
  reader.reals("w_ih", model.network.w_ih);
  reader.reals("w_ho", model.network.w_ho);
  reader.reals("b_h", model.network.b_h);
  reader.reals("b_o", model.network.b_o);
  reader.expect_end();
  return model;
}

void save_model(const Network& net, const ModelMetadata& metadata,
                const std::filesystem::path& path) {
  const std::string text = serialize_model(net, metadata);

  std::filesystem::path temp = path;
  temp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream file(temp, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open '" + temp.string() + "' for writing");
    file << text;
    file.flush();
    if (!file) {
      file.close();
      std::error_code ignored;
      std::filesystem::remove(temp, ignored);
      throw IoError("failed writing '" + temp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(temp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(temp, ignored);
    throw IoError("cannot replace '" + path.string() + "': " + ec.message());
  }
}

LoadedModel load_model(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open model file '" + path.string() + "'");
  const std::string text((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
  try {
    return parse_model(text);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace crawlnet

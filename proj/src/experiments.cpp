#include "crawlnet/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "crawlnet/errors.hpp"

namespace crawlnet {

namespace {

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  // "-0.000" reads like a sign error in a table.
  if (std::string_view(buf) == "-0.000") return "0.000";
  return buf;
}

void require_open(const std::ofstream& file, const std::filesystem::path& path) {
  if (!file) throw IoError("cannot open '" + path.string() + "' for writing");
}

void require_written(std::ofstream& file, const std::filesystem::path& path) {
  file.flush();
  if (!file) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

CaseSpec preset_case(std::string_view name) {
  CaseSpec spec;
  spec.name = std::string(name);
  if (name == "case1") {
    spec.hidden_size = 2;
    spec.learning_rate = 0.8;
    spec.tolerance_deg = 1.0;
  } else if (name == "case2") {
    spec.hidden_size = 2;
    spec.learning_rate = 0.5;
    spec.tolerance_deg = 5.0;
  } else if (name == "hardware-replica") {
    // The hardware run reports no tolerance; 1 deg matches the tighter case.
    spec.hidden_size = 20;
    spec.learning_rate = 0.3;
    spec.tolerance_deg = 1.0;
  } else {
    throw ConfigError("unknown case '" + std::string(name) +
                      "' (expected case1, case2 or hardware-replica)");
  }
  return spec;
}

std::uint64_t repeat_seed(const CaseSpec& spec, std::size_t repeat) {
  return spec.base_seed + repeat;
}

NetworkConfig network_config(const CaseSpec& spec, std::size_t repeat) {
  NetworkConfig config;
  config.hidden_size = spec.hidden_size;
  config.seed = repeat_seed(spec, repeat);
  return config;
}

TrainingConfig training_config(const CaseSpec& spec, std::size_t repeat) {
  TrainingConfig config;
  config.learning_rate = spec.learning_rate;
  config.schedule = spec.schedule;
  config.tolerance_deg = spec.tolerance_deg;
  config.max_generations = spec.max_generations;
  config.input_policy = spec.input_policy;
  config.denorm_mode = spec.denorm_mode;
  config.seed = repeat_seed(spec, repeat);
  return config;
}

TrainingRun run_repeat(const CaseSpec& spec, std::size_t repeat) {
  return train(init_network(network_config(spec, repeat)), training_config(spec, repeat),
               spec.targets);
}

CaseResult run_case(const CaseSpec& spec) {
  if (spec.repeats < 1) throw ConfigError("repeats must be at least 1");
  validate(network_config(spec, 0));
  validate(training_config(spec, 0));

  CaseResult result;
  result.runs.reserve(spec.repeats);
  for (std::size_t i = 0; i < spec.repeats; ++i) {
    result.runs.push_back(run_repeat(spec, i));
  }
  result.table = paper_table(result.runs.front());
  return result;
}

std::vector<GenerationRecord> table_rows(const TrainingRun& run) {
  std::vector<GenerationRecord> rows;
  if (run.records.empty()) return rows;
  const std::size_t last = run.records.back().generation;
  for (const auto& record : run.records) {
    const bool listed = std::find(std::begin(kTableGenerations), std::end(kTableGenerations),
                                  record.generation) != std::end(kTableGenerations);
    if (listed && record.generation < last) rows.push_back(record);
  }
  rows.push_back(run.records.back());
  return rows;
}

std::string paper_table(const TrainingRun& run) {
  std::ostringstream out;
  write_run(out, run, EmitFormat::kPaperTable);
  return out.str();
}

std::size_t oscillation_count(const TrainingRun& run) {
  std::size_t changes = 0;
  int previous = 0;
  for (const auto& record : run.records) {
    const int sign = (record.error1_deg > 0.0) - (record.error1_deg < 0.0);
    if (sign == 0) continue;
    if (previous != 0 && sign != previous) ++changes;
    previous = sign;
  }
  return changes;
}

SweepResult summarize(double axis_value, std::span<const TrainingRun> runs) {
  SweepResult result;
  result.axis_value = axis_value;
  std::vector<double> converged_generations;
  double oscillation_sum = 0.0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& run = runs[i];
    RepeatOutcome outcome{i, run.converged, run.abort_reason.has_value(), run.generations_used,
                          oscillation_count(run)};
    if (outcome.converged) {
      converged_generations.push_back(static_cast<double>(outcome.generations));
    }
    oscillation_sum += static_cast<double>(outcome.oscillations);
    result.repeats.push_back(outcome);
  }
  if (!runs.empty()) {
    const auto n = static_cast<double>(runs.size());
    result.convergence_rate = static_cast<double>(converged_generations.size()) / n;
    result.mean_oscillations = oscillation_sum / n;
  }
  if (!converged_generations.empty()) {
    std::sort(converged_generations.begin(), converged_generations.end());
    const std::size_t mid = converged_generations.size() / 2;
    result.median_generations = converged_generations.size() % 2 == 1
                                    ? converged_generations[mid]
                                    : 0.5 * (converged_generations[mid - 1] +
                                             converged_generations[mid]);
  }
  return result;
}

namespace {

template <typename Axis, typename Apply>
std::vector<SweepResult> sweep(std::span<const Axis> values, const CaseSpec& tmpl, Apply apply) {
  if (values.empty()) throw ConfigError("sweep needs at least one axis value");
  if (tmpl.repeats < 1) throw ConfigError("repeats must be at least 1");

  std::vector<CaseSpec> specs;
  for (const Axis& v : values) {
    CaseSpec spec = tmpl;
    apply(spec, v);
    // Reject the whole sweep before any training starts.
    validate(network_config(spec, 0));
    validate(training_config(spec, 0));
    specs.push_back(std::move(spec));
  }

  std::vector<SweepResult> results;
  results.reserve(specs.size());
  for (std::size_t k = 0; k < specs.size(); ++k) {
    std::vector<TrainingRun> runs;
    runs.reserve(tmpl.repeats);
    for (std::size_t i = 0; i < tmpl.repeats; ++i) runs.push_back(run_repeat(specs[k], i));
    results.push_back(summarize(static_cast<double>(values[k]), runs));
  }
  return results;
}

}  // namespace

std::vector<SweepResult> sweep_hidden(std::span<const std::size_t> sizes, const CaseSpec& tmpl) {
  return sweep(sizes, tmpl, [](CaseSpec& spec, std::size_t size) { spec.hidden_size = size; });
}

std::vector<SweepResult> sweep_lr(std::span<const double> rates, const CaseSpec& tmpl) {
  return sweep(rates, tmpl, [](CaseSpec& spec, double rate) { spec.learning_rate = rate; });
}

void write_run(std::ostream& out, const TrainingRun& run, EmitFormat format) {
  if (run.records.empty()) throw ConfigError("cannot emit an empty run");
  const std::string mode(to_string(run.config.denorm_mode));

  switch (format) {
    case EmitFormat::kRunCsv:
      out << "# denorm_mode=" << mode << '\n';
      out << "generation,servo1_deg,servo2_deg,error1_deg,error2_deg,cost,lr_used\n";
      for (const auto& r : run.records) {
        out << r.generation << ',' << format_double(r.servo1_deg) << ','
            << format_double(r.servo2_deg) << ',' << format_double(r.error1_deg) << ','
            << format_double(r.error2_deg) << ',' << format_double(r.cost) << ','
            << format_double(r.lr_used) << '\n';
      }
      break;
    case EmitFormat::kPlotCsv:
      out << "# denorm_mode=" << mode << '\n';
      out << "generation,error1_deg,error2_deg\n";
      for (const auto& r : run.records) {
        out << r.generation << ',' << format_double(r.error1_deg) << ','
            << format_double(r.error2_deg) << '\n';
      }
      break;
    case EmitFormat::kPaperTable: {
      out << "# hidden=" << run.final_network.hidden_size()
          << " lr=" << format_double(run.config.learning_rate)
          << " schedule=" << to_string(run.config.schedule)
          << " tolerance_deg=" << format_double(run.config.tolerance_deg)
          << " denorm_mode=" << mode << " seed=" << run.config.seed << '\n';
      out << "Generation\tServo 1 (°)\tServo 2 (°)\tError 1 (°)\tError 2 (°)\n";
      for (const auto& r : table_rows(run)) {
        out << r.generation << '\t' << fixed3(r.servo1_deg) << '\t' << fixed3(r.servo2_deg)
            << '\t' << fixed3(r.error1_deg) << '\t' << fixed3(r.error2_deg) << '\n';
      }
      if (run.converged) {
        out << "# converged after " << run.generations_used << " generations\n";
      } else if (run.abort_reason) {
        out << "# aborted: " << *run.abort_reason << '\n';
      } else {
        out << "# not converged within " << run.generations_used << " generations\n";
      }
      break;
    }
  }
}

void write_sweep_csv(std::ostream& out, std::span<const SweepResult> sweep) {
  if (sweep.empty()) throw ConfigError("cannot emit an empty sweep");
  out << "axis_value,repeat,converged,generations,oscillations\n";
  for (const auto& result : sweep) {
    for (const auto& r : result.repeats) {
      out << format_double(result.axis_value) << ',' << r.repeat << ',' << (r.converged ? 1 : 0)
          << ',' << r.generations << ',' << r.oscillations << '\n';
    }
  }
}

void write_trajectory_csv(std::ostream& out, std::span<const BodyPose> trajectory) {
  out << "generation,x,y,heading\n";
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    const auto& p = trajectory[i];
    out << (i + 1) << ',' << format_double(p.x) << ',' << format_double(p.y) << ','
        << format_double(p.heading_deg) << '\n';
  }
}

void emit(const TrainingRun& run, EmitFormat format, const std::filesystem::path& path) {
  if (run.records.empty()) throw ConfigError("cannot emit an empty run");
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  require_open(file, path);
  write_run(file, run, format);
  require_written(file, path);
}

void emit(std::span<const SweepResult> sweep, const std::filesystem::path& path) {
  if (sweep.empty()) throw ConfigError("cannot emit an empty sweep");
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  require_open(file, path);
  write_sweep_csv(file, sweep);
  require_written(file, path);
}

std::vector<GenerationRecord> read_run_csv(std::istream& in) {
  static constexpr std::string_view kHeader =
      "generation,servo1_deg,servo2_deg,error1_deg,error2_deg,cost,lr_used";

  std::vector<GenerationRecord> records;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != kHeader) {
        throw ParseError("line " + std::to_string(line_no) + ": expected header '" +
                         std::string(kHeader) + "'");
      }
      header_seen = true;
      continue;
    }

    std::array<double, 7> fields{};
    std::size_t start = 0;
    for (std::size_t k = 0; k < fields.size(); ++k) {
      const auto comma = line.find(',', start);
      const bool last = k + 1 == fields.size();
      if (last != (comma == std::string::npos)) {
        throw ParseError("line " + std::to_string(line_no) + ": expected 7 fields");
      }
      const std::string_view cell =
          std::string_view(line).substr(start, last ? std::string::npos : comma - start);
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), fields[k]);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw ParseError("line " + std::to_string(line_no) + ": bad number '" +
                         std::string(cell) + "'");
      }
      start = comma + 1;
    }
    if (fields[0] < 1.0 || fields[0] != std::floor(fields[0])) {
      throw ParseError("line " + std::to_string(line_no) + ": bad generation index");
    }
    records.push_back({static_cast<std::size_t>(fields[0]), fields[1], fields[2], fields[3],
                       fields[4], fields[5], fields[6]});
  }
  if (!header_seen) throw ParseError("run CSV has no header line");
  return records;
}

}  // namespace crawlnet

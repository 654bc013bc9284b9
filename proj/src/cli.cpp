#include "crawlnet/cli.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "crawlnet/crawler_sim.hpp"
#include "crawlnet/errors.hpp"
#include "crawlnet/experiments.hpp"
#include "crawlnet/reference_tables.hpp"
#include "crawlnet/store.hpp"

namespace crawlnet {

namespace {

constexpr std::uint64_t kDefaultSeed = 1;

// Flag-value syntax problems; mapped to the usage exit status.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_reals(const std::string& text, std::string_view flag) {
  std::vector<double> values;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    const std::string_view cell =
        std::string_view(text).substr(start, comma == std::string::npos ? std::string::npos
                                                                        : comma - start);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
      throw UsageError(std::string(flag) + ": cannot parse '" + std::string(cell) +
                       "' as a number");
    }
    values.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return values;
}

std::vector<std::size_t> parse_counts(const std::string& text, std::string_view flag) {
  std::vector<std::size_t> counts;
  for (double v : parse_reals(text, flag)) {
    if (v < 0.0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
      throw UsageError(std::string(flag) + ": expected non-negative integers");
    }
    counts.push_back(static_cast<std::size_t>(v));
  }
  return counts;
}

ServoAngles parse_pair(const std::string& text, std::string_view flag) {
  const auto v = parse_reals(text, flag);
  if (v.size() != 2) throw UsageError(std::string(flag) + ": expected two comma-separated values");
  return {v[0], v[1]};
}

ArmGeometry parse_geometry(const std::string& text) {
  const auto v = parse_reals(text, "--geometry");
  if (v.size() != 3) throw UsageError("--geometry: expected link1,link2,shoulder_height in cm");
  ArmGeometry geom{v[0], v[1], v[2]};
  validate(geom);
  return geom;
}

template <typename Parse>
auto as_usage(Parse parse) {
  try {
    return parse();
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
}

// Options shared by train, sweep-hidden and sweep-lr.
struct TrainingFlags {
  std::size_t hidden = 2;
  double lr = 0.8;
  double tolerance = 1.0;
  std::size_t max_gens = 20000;
  std::string schedule = "constant";
  std::string targets = "90,120";
  std::string mode = "paper-stated";
  std::string input_policy = "fixed";
  std::uint64_t seed = kDefaultSeed;

  void add_to(CLI::App& cmd, bool with_hidden, bool with_lr) {
    if (with_hidden) cmd.add_option("--hidden", hidden, "hidden layer size")->capture_default_str();
    if (with_lr) cmd.add_option("--lr", lr, "learning rate")->capture_default_str();
    cmd.add_option("--tolerance", tolerance, "per-servo error tolerance (deg)")
        ->capture_default_str();
    cmd.add_option("--max-gens", max_gens, "generation budget")->capture_default_str();
    cmd.add_option("--schedule", schedule, "constant | exp:<f> | step:<f>:<n>")
        ->capture_default_str();
    cmd.add_option("--targets", targets, "servo1,servo2 target angles (deg)")
        ->capture_default_str();
    cmd.add_option("--mode", mode, "paper-stated | table-affine")->capture_default_str();
    cmd.add_option("--input-policy", input_policy, "fixed | resample")->capture_default_str();
    cmd.add_option("--seed", seed, "random seed")->capture_default_str();
  }

  CaseSpec to_spec(std::string name) const {
    CaseSpec spec;
    spec.name = std::move(name);
    spec.hidden_size = hidden;
    spec.learning_rate = lr;
    spec.tolerance_deg = tolerance;
    spec.max_generations = max_gens;
    spec.schedule = as_usage([&] { return parse_schedule(schedule); });
    spec.targets = parse_pair(targets, "--targets");
    spec.denorm_mode = as_usage([&] { return parse_denorm_mode(mode); });
    spec.input_policy = as_usage([&] { return parse_input_policy(input_policy); });
    spec.base_seed = seed;
    return spec;
  }
};

void report_run(std::ostream& out, const TrainingRun& run) {
  if (run.converged) {
    out << "converged at generation " << run.generations_used << '\n';
  } else if (run.abort_reason) {
    out << "aborted after " << run.generations_used << " generations: " << *run.abort_reason
        << '\n';
  } else {
    out << "not converged within " << run.generations_used << " generations\n";
  }
}

void write_outputs(const TrainingRun& run, const std::string& out_csv,
                   const std::string& out_plot, const std::string& out_model) {
  if (!out_csv.empty()) emit(run, EmitFormat::kRunCsv, out_csv);
  if (!out_plot.empty()) emit(run, EmitFormat::kPlotCsv, out_plot);
  if (!out_model.empty()) save_model(run.final_network, metadata_from(run), out_model);
}

void print_sweep(std::ostream& out, std::string_view axis, const CaseSpec& tmpl,
                 std::span<const SweepResult> results) {
  out << "# sweep over " << axis << ": repeats=" << tmpl.repeats;
  if (axis != "hidden_size") out << " hidden=" << tmpl.hidden_size;
  if (axis != "learning_rate") out << " lr=" << format_double(tmpl.learning_rate);
  out << " tolerance_deg=" << format_double(tmpl.tolerance_deg)
      << " denorm_mode=" << to_string(tmpl.denorm_mode) << " base_seed=" << tmpl.base_seed
      << '\n';
  out << axis << "\tconvergence_rate\tmedian_generations\tmean_oscillations\n";
  char buf[128];
  for (const auto& r : results) {
    const std::string median =
        r.median_generations ? format_double(*r.median_generations) : std::string("-");
    std::snprintf(buf, sizeof buf, "%s\t%.3f\t%s\t%.3f\n", format_double(r.axis_value).c_str(),
                  r.convergence_rate, median.c_str(), r.mean_oscillations);
    out << buf;
  }
}

int run_verify_tables(std::ostream& out) {
  const auto checks = verify_reference_rows(kReferenceTargets, 0.01);
  std::size_t consistent = 0;
  out << "table\tgeneration\tservo1+error1\tservo2+error2\tstatus\n";
  for (const auto& c : checks) {
    const auto cell = [](const std::optional<double>& v) {
      if (!v) return std::string("blank");
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", *v);
      return std::string(buf);
    };
    out << c.row.table << '\t' << c.row.generation << '\t' << cell(c.recovered1_deg) << '\t'
        << cell(c.recovered2_deg) << '\t';
    if (c.consistent()) {
      ++consistent;
      out << "ok\n";
    } else {
      out << "MISMATCH";
      if (!c.servo1_ok) out << " (servo 1)";
      if (!c.servo2_ok) out << " (servo 2)";
      out << '\n';
    }
  }
  out << consistent << '/' << checks.size() << " rows consistent with targets ("
      << format_double(kReferenceTargets.servo1_deg) << ','
      << format_double(kReferenceTargets.servo2_deg) << ") within 0.01 deg\n";
  return consistent == checks.size() ? kExitOk : kExitDomainError;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Online-trained 1-H-2 sigmoid network driving a simulated crawling arm",
               "crawlnet"};
  app.require_subcommand(1);

  // train
  auto* train_cmd = app.add_subcommand("train", "train one network and print its generation table");
  TrainingFlags train_flags;
  train_flags.add_to(*train_cmd, true, true);
  std::string out_model, out_csv, out_plot;
  train_cmd->add_option("--out-model", out_model, "save the trained network here");
  train_cmd->add_option("--out-csv", out_csv, "write the per-generation run CSV here");
  train_cmd->add_option("--out-plot", out_plot, "write the generation/error plot CSV here");

  // sweep-hidden
  auto* sweep_hidden_cmd = app.add_subcommand("sweep-hidden", "paired-seed hidden size sweep");
  TrainingFlags hidden_flags;
  hidden_flags.add_to(*sweep_hidden_cmd, false, true);
  std::string sizes = "2,5,10,20,25,40";
  std::size_t hidden_repeats = 50;
  std::string hidden_out;
  sweep_hidden_cmd->add_option("--sizes", sizes, "comma-separated hidden sizes")
      ->capture_default_str();
  sweep_hidden_cmd->add_option("--repeats", hidden_repeats, "seeds per size")
      ->capture_default_str();
  sweep_hidden_cmd->add_option("--out", hidden_out, "write the sweep CSV here");

  // sweep-lr
  auto* sweep_lr_cmd = app.add_subcommand("sweep-lr", "paired-seed learning rate sweep");
  TrainingFlags lr_flags;
  lr_flags.add_to(*sweep_lr_cmd, true, false);
  std::string rates = "0.1,0.3,0.5,0.8,0.9";
  std::size_t lr_repeats = 50;
  std::string lr_out;
  sweep_lr_cmd->add_option("--rates", rates, "comma-separated learning rates")
      ->capture_default_str();
  sweep_lr_cmd->add_option("--repeats", lr_repeats, "seeds per rate")->capture_default_str();
  sweep_lr_cmd->add_option("--out", lr_out, "write the sweep CSV here");

  // replay
  auto* replay_cmd = app.add_subcommand("replay", "drive the crawler simulation with a run or model");
  std::string replay_model, replay_csv, replay_out;
  std::string geometry = "5,5,6";
  std::string rest = "90,180";
  auto* model_opt = replay_cmd->add_option("--model", replay_model, "saved model file");
  auto* csv_opt = replay_cmd->add_option("--run-csv", replay_csv, "run CSV from train/case");
  model_opt->excludes(csv_opt);
  replay_cmd->add_option("--geometry", geometry, "link1,link2,shoulder_height (cm)")
      ->capture_default_str();
  replay_cmd->add_option("--rest", rest, "rest pose servo1,servo2 (deg)")->capture_default_str();
  replay_cmd->add_option("--out", replay_out, "write the trajectory CSV here");

  // verify-tables
  auto* verify_cmd =
      app.add_subcommand("verify-tables", "check target recovery on the published tables");

  // case
  auto* case_cmd = app.add_subcommand("case", "run a preset configuration");
  std::string case_name;
  std::uint64_t case_seed = kDefaultSeed;
  std::size_t case_repeats = 1;
  std::string case_mode = "paper-stated";
  std::string case_csv, case_plot, case_model;
  case_cmd->add_option("--name", case_name, "case1 | case2 | hardware-replica")->required();
  case_cmd->add_option("--seed", case_seed, "base seed")->capture_default_str();
  case_cmd->add_option("--repeats", case_repeats, "number of seeds")->capture_default_str();
  case_cmd->add_option("--mode", case_mode, "paper-stated | table-affine")->capture_default_str();
  case_cmd->add_option("--out-csv", case_csv, "run CSV of the first repeat");
  case_cmd->add_option("--out-plot", case_plot, "plot CSV of the first repeat");
  case_cmd->add_option("--out-model", case_model, "model of the first repeat");

  if (args.empty()) {
    err << app.help();
    return kExitUsage;
  }

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "crawlnet: " << e.what() << '\n';
    err << "run 'crawlnet --help' for usage\n";
    return kExitUsage;
  }

  try {
    if (*train_cmd) {
      const CaseSpec spec = train_flags.to_spec("train");
      const TrainingRun run = run_repeat(spec, 0);
      out << paper_table(run);
      report_run(out, run);
      write_outputs(run, out_csv, out_plot, out_model);
    } else if (*sweep_hidden_cmd) {
      CaseSpec tmpl = hidden_flags.to_spec("sweep-hidden");
      tmpl.repeats = hidden_repeats;
      const auto size_list = parse_counts(sizes, "--sizes");
      const auto results = sweep_hidden(size_list, tmpl);
      print_sweep(out, "hidden_size", tmpl, results);
      if (!hidden_out.empty()) emit(results, hidden_out);
    } else if (*sweep_lr_cmd) {
      CaseSpec tmpl = lr_flags.to_spec("sweep-lr");
      tmpl.repeats = lr_repeats;
      const auto rate_list = parse_reals(rates, "--rates");
      const auto results = sweep_lr(rate_list, tmpl);
      print_sweep(out, "learning_rate", tmpl, results);
      if (!lr_out.empty()) emit(results, lr_out);
    } else if (*replay_cmd) {
      if (replay_model.empty() && replay_csv.empty()) {
        throw UsageError("replay needs --model or --run-csv");
      }
      const ArmGeometry geom = as_usage([&] { return parse_geometry(geometry); });
      const ServoAngles rest_pose = parse_pair(rest, "--rest");

      TrainingRun run;
      if (!replay_model.empty()) {
        const LoadedModel model = load_model(replay_model);
        const auto trace = feedforward(model.network, model.metadata.input);
        const auto mode = model.metadata.denorm_mode;
        const ServoAngles angles{denormalize(trace.output[0], mode),
                                 denormalize(trace.output[1], mode)};
        const ServoAngles error = angle_error(model.metadata.targets, angles);
        run.records.push_back({1, angles.servo1_deg, angles.servo2_deg, error.servo1_deg,
                               error.servo2_deg, 0.0, model.metadata.learning_rate});
      } else {
        std::ifstream file(replay_csv, std::ios::binary);
        if (!file) throw IoError("cannot open run CSV '" + replay_csv + "'");
        run.records = read_run_csv(file);
        if (run.records.empty()) throw ParseError(replay_csv + ": run CSV has no records");
      }
      const auto trajectory = replay_run(run, geom, rest_pose);
      const BodyPose& last = trajectory.back();
      out << "cycles " << trajectory.size() << '\n';
      out << "final_pose x=" << format_double(last.x) << " y=" << format_double(last.y)
          << " heading=" << format_double(last.heading_deg) << '\n';
      if (!replay_out.empty()) {
        std::ofstream file(replay_out, std::ios::binary | std::ios::trunc);
        if (!file) throw IoError("cannot open '" + replay_out + "' for writing");
        write_trajectory_csv(file, trajectory);
        if (!file.flush()) throw IoError("failed writing '" + replay_out + "'");
      }
    } else if (*verify_cmd) {
      return run_verify_tables(out);
    } else if (*case_cmd) {
      CaseSpec spec = as_usage([&] { return preset_case(case_name); });
      spec.base_seed = case_seed;
      spec.repeats = case_repeats;
      spec.denorm_mode = as_usage([&] { return parse_denorm_mode(case_mode); });
      const CaseResult result = run_case(spec);
      out << "# case " << spec.name << '\n';
      out << result.table;
      report_run(out, result.runs.front());
      if (result.runs.size() > 1) {
        const SweepResult summary = summarize(spec.learning_rate, result.runs);
        out << "repeats " << result.runs.size() << " convergence_rate "
            << format_double(summary.convergence_rate) << " median_generations "
            << (summary.median_generations ? format_double(*summary.median_generations) : "-")
            << '\n';
      }
      write_outputs(result.runs.front(), case_csv, case_plot, case_model);
    }
  } catch (const UsageError& e) {
    err << "crawlnet: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "crawlnet: configuration error: " << e.what() << '\n';
    return kExitDomainError;
  } catch (const std::exception& e) {
    err << "crawlnet: " << e.what() << '\n';
    return kExitDomainError;
  }
  return kExitOk;
}

}  // namespace crawlnet

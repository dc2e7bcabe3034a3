// Command-line front end: count reps in recorded files, follow live
// streams, evaluate against labeled datasets, generate synthetic clips,
// and benchmark streaming latency.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "repcount/repcount.hpp"

namespace {

using nlohmann::ordered_json;

struct PipelineOptions {
  int window = 256;
  int step = 1;
  bool center = false;
  double fps = 0.0;
  double min_period = 1.0;
  double max_period = 3.0;
};

void add_pipeline_flags(CLI::App& cmd, PipelineOptions& opt) {
  cmd.add_option("--window", opt.window,
                 "Analysis window length in frames")
      ->capture_default_str();
  cmd.add_option("--step", opt.step, "Hop between analysis windows in frames")
      ->capture_default_str();
  cmd.add_flag("--center", opt.center,
               "Subtract the mean joint position from every frame");
  cmd.add_option("--fps", opt.fps,
                 "Frame rate in Hz; enables the period bounds below");
  cmd.add_option("--min-period", opt.min_period,
                 "Shortest repetition period in seconds (needs --fps)")
      ->capture_default_str();
  cmd.add_option("--max-period", opt.max_period,
                 "Longest repetition period in seconds (needs --fps)")
      ->capture_default_str();
}

repcount::CountingConfig make_config(const PipelineOptions& opt) {
  repcount::CountingConfig cfg;
  cfg.window = opt.window;
  cfg.step = opt.step;
  cfg.center_frames = opt.center;
  if (opt.fps > 0.0) {
    if (opt.min_period <= 0.0 || opt.max_period < opt.min_period) {
      throw repcount::ConfigError(
          "period bounds must satisfy 0 < --min-period <= --max-period");
    }
    cfg.min_freq = 1.0 / (opt.max_period * opt.fps);
    cfg.max_freq = std::min(0.5, 1.0 / (opt.min_period * opt.fps));
  }
  cfg.validate();
  return cfg;
}

// stdout unless --out was given.
class OutputTarget {
 public:
  void open(const std::string& path) {
    if (path.empty()) return;
    file_.open(path);
    if (!file_) {
      throw repcount::MissingFile("cannot open '" + path + "' for writing");
    }
    stream_ = &file_;
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_ = &std::cout;
};

ordered_json person_line(const repcount::CountReport& report) {
  ordered_json obj;
  obj["person"] = report.person_id;
  obj["count"] = report.rounded_count;
  obj["raw_count"] = report.raw_count;
  obj["frames"] = report.frames_processed;
  return obj;
}

ordered_json clip_line(const repcount::LabeledClip& clip,
                       const repcount::CountReport& report) {
  ordered_json obj;
  obj["clip"] = clip.clip_id;
  obj["exercise"] = clip.exercise_name;
  obj["count"] = report.rounded_count;
  obj["raw_count"] = report.raw_count;
  obj["truth"] = clip.ground_truth_count;
  obj["frames"] = report.frames_processed;
  return obj;
}

std::vector<repcount::GridPoint> parse_grid(const std::string& text) {
  std::vector<repcount::GridPoint> grid;
  std::istringstream tokens(text);
  std::string token;
  while (std::getline(tokens, token, ',')) {
    const std::size_t sep = token.find_first_of("x:");
    if (sep == std::string::npos) {
      throw repcount::ConfigError("--grid expects WxS[,WxS...], got '" +
                                  token + "'");
    }
    try {
      repcount::GridPoint point;
      point.window = std::stoi(token.substr(0, sep));
      point.step = std::stoi(token.substr(sep + 1));
      grid.push_back(point);
    } catch (const std::exception&) {
      throw repcount::ConfigError("--grid entry '" + token +
                                  "' is not a pair of integers");
    }
  }
  if (grid.empty()) {
    throw repcount::ConfigError("--grid is empty");
  }
  return grid;
}

std::vector<repcount::SkeletonFrame> sequence_to_frames(
    const repcount::SkeletonSequence& seq) {
  std::vector<repcount::SkeletonFrame> frames;
  frames.reserve(seq.frames.size());
  const double fps = (seq.fps > 0.0) ? seq.fps : 30.0;
  for (std::size_t n = 0; n < seq.frames.size(); ++n) {
    repcount::SkeletonFrame f;
    f.timestamp = static_cast<double>(n) / fps;
    f.person_id = seq.person_id;
    f.joints = seq.frames[n];
    f.joint_count = seq.joint_count;
    f.dim = seq.dim;
    frames.push_back(std::move(f));
  }
  return frames;
}

void warn_short_input(const std::string& label, std::size_t frames,
                      int window) {
  if (frames < static_cast<std::size_t>(window)) {
    std::cerr << "warning: " << label << " has " << frames
              << " frames, fewer than the " << window
              << "-frame window; analysed as a single block\n";
  }
}

// ---------------------------------------------------------------- count --

struct CountArgs {
  std::vector<std::string> inputs;
  std::string dataset = "jsonl";
  std::string root;
  int clips = 20;
  std::uint64_t seed = 7;
  bool use_2d = false;
  std::string out;
  PipelineOptions pipe;
};

int run_count(const CountArgs& args) {
  const repcount::CountingConfig cfg = make_config(args.pipe);
  OutputTarget out;
  out.open(args.out);

  if (args.dataset == "jsonl") {
    if (args.inputs.empty()) {
      throw repcount::ConfigError("count needs at least one JSONL file");
    }
    std::vector<repcount::SkeletonFrame> frames;
    for (const auto& path : args.inputs) {
      auto part = repcount::load_generic_jsonl(path);
      frames.insert(frames.end(), std::make_move_iterator(part.begin()),
                    std::make_move_iterator(part.end()));
    }
    const auto sequences = repcount::group_by_person(frames, args.pipe.fps);
    for (const auto& seq : sequences) {
      warn_short_input("person '" + seq.person_id + "'", seq.size(),
                       cfg.window);
      const auto report = repcount::count_sequence(seq, cfg);
      out.stream() << person_line(report).dump() << '\n';
    }
    return 0;
  }

  std::vector<repcount::LabeledClip> clips;
  if (args.dataset == "synth") {
    clips = repcount::synthetic_suite(args.clips, args.seed, cfg.window);
  } else {
    if (args.root.empty()) {
      throw repcount::ConfigError("--root is required for dataset '" +
                                  args.dataset + "'");
    }
    clips = (args.dataset == "mmfit")
                ? repcount::load_mmfit(args.root, "", args.use_2d)
                : repcount::load_uiprmd(args.root, "");
  }
  for (const auto& clip : clips) {
    warn_short_input("clip '" + clip.clip_id + "'", clip.sequence.size(),
                     cfg.window);
    const auto report = repcount::count_sequence(clip.sequence, cfg);
    out.stream() << clip_line(clip, report).dump() << '\n';
  }
  return 0;
}

// --------------------------------------------------------------- stream --

int run_stream(const PipelineOptions& pipe) {
  const repcount::CountingConfig cfg = make_config(pipe);
  repcount::MultiPersonRouter router(cfg);

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(std::cin, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    repcount::StreamUpdate update;
    try {
      update = router.step(repcount::parse_jsonl_frame(line, line_no));
    } catch (const repcount::Error& e) {
      std::cerr << "warning: skipping line " << line_no << ": " << e.what()
                << '\n';
      continue;
    }
    if (!update.column_completed) continue;
    ordered_json obj;
    obj["person"] = update.person_id;
    obj["frames"] = update.frames_processed;
    obj["raw_count"] = update.raw_count;
    obj["count"] = update.rounded_count;
    if (update.latest_freq) {
      obj["freq"] = *update.latest_freq;
    } else {
      obj["freq"] = nullptr;
    }
    std::cout << obj.dump() << std::endl;  // flush per update
  }
  for (const auto& report : router.finalize_all()) {
    std::cout << person_line(report).dump() << std::endl;
  }
  return 0;
}

// ----------------------------------------------------------------- eval --

struct EvalArgs {
  std::string dataset;
  std::string root;
  int clips = 100;
  std::uint64_t seed = 7;
  std::string grid = "256x1";
  std::string format = "table";
  int threads = 0;
  bool use_2d = false;
  std::string out;
  PipelineOptions pipe;
};

int run_eval(const EvalArgs& args) {
  const repcount::CountingConfig base_cfg = make_config(args.pipe);
  const auto grid = parse_grid(args.grid);
  OutputTarget out;
  out.open(args.out);

  std::vector<repcount::LabeledClip> clips;
  if (args.dataset == "synth") {
    int max_window = 0;
    for (const auto& point : grid) {
      max_window = std::max(max_window, point.window);
    }
    clips = repcount::synthetic_suite(args.clips, args.seed, max_window);
  } else {
    if (args.root.empty()) {
      throw repcount::ConfigError("--root is required for dataset '" +
                                  args.dataset + "'");
    }
    clips = (args.dataset == "mmfit")
                ? repcount::load_mmfit(args.root, "", args.use_2d)
                : repcount::load_uiprmd(args.root, "");
  }

  const auto result = repcount::sweep(clips, grid, base_cfg, args.threads);
  if (args.format == "csv") {
    repcount::write_sweep_csv(result, out.stream());
  } else if (args.format == "jsonl") {
    for (const auto& cfg : result.configs) {
      ordered_json obj;
      obj["window"] = cfg.config.window;
      obj["step"] = cfg.config.step;
      obj["clips"] = cfg.clip_count;
      obj["mae"] = cfg.overall_mae;
      obj["oboa"] = cfg.oboa;
      obj["fallbacks"] = cfg.fallback_count;
      obj["errors"] = cfg.failure_count;
      out.stream() << obj.dump() << '\n';
    }
  } else {
    repcount::write_sweep_table(result, out.stream());
  }
  return 0;
}

// ---------------------------------------------------------------- synth --

struct SynthArgs {
  double f0 = 0.02;
  std::string chirp;
  int frames = 1000;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  int joints = 18;
  int dim = 3;
  std::string person = "p0";
  double fps = 30.0;
  std::string out;
};

int run_synth(const SynthArgs& args) {
  repcount::SynthSpec spec;
  spec.freq_start = args.f0;
  if (!args.chirp.empty()) {
    const std::size_t sep = args.chirp.find(':');
    if (sep == std::string::npos) {
      throw repcount::InvalidSpec("--chirp expects START:END, got '" +
                                  args.chirp + "'");
    }
    try {
      spec.freq_start = std::stod(args.chirp.substr(0, sep));
      spec.freq_end = std::stod(args.chirp.substr(sep + 1));
    } catch (const std::exception&) {
      throw repcount::InvalidSpec("--chirp entry '" + args.chirp +
                                  "' is not a pair of frequencies");
    }
  }
  spec.frames = args.frames;
  spec.noise_sigma = args.sigma;
  spec.seed = args.seed;
  spec.joint_count = args.joints;
  spec.dim = args.dim;
  spec.person_id = args.person;
  spec.fps = args.fps;

  const auto sequence = repcount::generate_synthetic(spec);
  const auto frames = sequence_to_frames(sequence);

  ordered_json truth;
  truth["count"] = spec.ground_truth();
  truth["freq_start"] = spec.freq_start;
  truth["freq_end"] = (spec.freq_end > 0.0) ? spec.freq_end : spec.freq_start;
  truth["frames"] = spec.frames;
  truth["sigma"] = spec.noise_sigma;
  truth["seed"] = spec.seed;

  if (args.out.empty()) {
    repcount::write_generic_jsonl(frames, std::cout);
    std::cerr << truth.dump() << '\n';
  } else {
    repcount::write_generic_jsonl(frames, args.out);
    std::ofstream truth_out(args.out + ".truth");
    if (!truth_out) {
      throw repcount::MissingFile("cannot open '" + args.out +
                                  ".truth' for writing");
    }
    truth_out << truth.dump() << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------- bench --

struct BenchArgs {
  long long frames = 100000;
  std::uint64_t seed = 1;
  int joints = 18;
  int dim = 3;
  PipelineOptions pipe;
};

int run_bench(const BenchArgs& args) {
  const repcount::CountingConfig cfg = make_config(args.pipe);
  ordered_json obj;
  obj["frames"] = args.frames;
  obj["window"] = cfg.window;
  obj["step"] = cfg.step;
  if (args.frames <= 0) {
    std::cout << obj.dump() << '\n';
    return 0;
  }

  repcount::SynthSpec spec;
  spec.freq_start = 0.02;
  spec.frames = static_cast<int>(args.frames);
  spec.noise_sigma = 0.01;
  spec.seed = args.seed;
  spec.joint_count = args.joints;
  spec.dim = args.dim;
  const auto frames = sequence_to_frames(repcount::generate_synthetic(spec));

  repcount::PersonSession session(cfg);
  std::vector<double> micros;
  micros.reserve(frames.size());
  using clock = std::chrono::steady_clock;
  for (const auto& frame : frames) {
    const auto t0 = clock::now();
    session.push(frame);
    const auto t1 = clock::now();
    micros.push_back(
        std::chrono::duration<double, std::micro>(t1 - t0).count());
  }
  session.finalize();

  std::sort(micros.begin(), micros.end());
  const auto quantile = [&](double q) {
    const std::size_t idx = static_cast<std::size_t>(
        q * static_cast<double>(micros.size() - 1));
    return micros[idx];
  };
  obj["median_us"] = quantile(0.5);
  obj["p99_us"] = quantile(0.99);
  obj["max_us"] = micros.back();
  std::cout << obj.dump() << '\n';
  return 0;
}

int exit_code_for(const repcount::Error& e) {
  // Usage and input-shape problems exit 2; pipeline failures exit 3.
  if (dynamic_cast<const repcount::ConfigError*>(&e) ||
      dynamic_cast<const repcount::InvalidSpec*>(&e) ||
      dynamic_cast<const repcount::ParseError*>(&e) ||
      dynamic_cast<const repcount::SchemaError*>(&e) ||
      dynamic_cast<const repcount::MissingFile*>(&e) ||
      dynamic_cast<const repcount::MalformedLabels*>(&e) ||
      dynamic_cast<const repcount::RaggedRow*>(&e)) {
    return 2;
  }
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Counts exercise repetitions from skeleton keypoint streams"};
  app.require_subcommand(1);

  CountArgs count_args;
  auto* count_cmd =
      app.add_subcommand("count", "Count repetitions in recorded input");
  count_cmd->add_option("inputs", count_args.inputs, "JSONL input files");
  count_cmd
      ->add_option("--dataset", count_args.dataset,
                   "Input kind: jsonl, mmfit, uiprmd, synth")
      ->check(CLI::IsMember({"jsonl", "mmfit", "uiprmd", "synth"}))
      ->capture_default_str();
  count_cmd->add_option("--root", count_args.root, "Dataset root directory");
  count_cmd->add_option("--clips", count_args.clips,
                        "Synthetic clip count (--dataset synth)");
  count_cmd->add_option("--seed", count_args.seed, "Synthetic suite seed");
  count_cmd->add_flag("--use-2d", count_args.use_2d,
                      "Load 2-D poses (mmfit)");
  count_cmd->add_option("--out", count_args.out, "Write output here");
  add_pipeline_flags(*count_cmd, count_args.pipe);

  PipelineOptions stream_pipe;
  auto* stream_cmd = app.add_subcommand(
      "stream", "Count live JSONL frames from standard input");
  add_pipeline_flags(*stream_cmd, stream_pipe);

  EvalArgs eval_args;
  auto* eval_cmd =
      app.add_subcommand("eval", "Score counting accuracy over a dataset");
  eval_cmd
      ->add_option("--dataset", eval_args.dataset,
                   "Dataset kind: synth, mmfit, uiprmd")
      ->check(CLI::IsMember({"synth", "mmfit", "uiprmd"}))
      ->required();
  eval_cmd->add_option("--root", eval_args.root, "Dataset root directory");
  eval_cmd->add_option("--clips", eval_args.clips,
                       "Synthetic clip count (--dataset synth)");
  eval_cmd->add_option("--seed", eval_args.seed, "Synthetic suite seed");
  eval_cmd
      ->add_option("--grid", eval_args.grid,
                   "Window/step grid, e.g. 256x1,128x32 (also 256:1)")
      ->capture_default_str();
  eval_cmd
      ->add_option("--format", eval_args.format,
                   "Output format: table, csv, jsonl")
      ->check(CLI::IsMember({"table", "csv", "jsonl"}))
      ->capture_default_str();
  eval_cmd->add_option("--threads", eval_args.threads,
                       "Worker threads (0: hardware)");
  eval_cmd->add_flag("--use-2d", eval_args.use_2d, "Load 2-D poses (mmfit)");
  eval_cmd->add_option("--out", eval_args.out, "Write output here");
  add_pipeline_flags(*eval_cmd, eval_args.pipe);

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand(
      "synth", "Generate a labeled synthetic clip as JSONL");
  synth_cmd->add_option("--f0", synth_args.f0,
                        "Stationary frequency in cycles/frame")
      ->capture_default_str();
  synth_cmd->add_option("--chirp", synth_args.chirp,
                        "Linear sweep START:END in cycles/frame");
  synth_cmd->add_option("--frames", synth_args.frames, "Clip length")
      ->capture_default_str();
  synth_cmd->add_option("--sigma", synth_args.sigma,
                        "Gaussian coordinate noise");
  synth_cmd->add_option("--seed", synth_args.seed, "Generator seed");
  synth_cmd->add_option("--joints", synth_args.joints, "Joint count")
      ->capture_default_str();
  synth_cmd->add_option("--dim", synth_args.dim, "2 or 3")
      ->capture_default_str();
  synth_cmd->add_option("--person", synth_args.person, "Person id");
  synth_cmd->add_option("--fps", synth_args.fps, "Timestamp rate")
      ->capture_default_str();
  synth_cmd->add_option("--out", synth_args.out,
                        "Output path (default stdout; truth goes to "
                        "<out>.truth or stderr)");

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand(
      "bench", "Measure per-frame streaming latency on synthetic input");
  bench_cmd->add_option("--frames", bench_args.frames, "Frames to push")
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench_args.seed, "Generator seed");
  bench_cmd->add_option("--joints", bench_args.joints, "Joint count")
      ->capture_default_str();
  bench_cmd->add_option("--dim", bench_args.dim, "2 or 3")
      ->capture_default_str();
  add_pipeline_flags(*bench_cmd, bench_args.pipe);

  try {
    app.parse(argc, argv);
    if (app.got_subcommand(count_cmd)) return run_count(count_args);
    if (app.got_subcommand(stream_cmd)) return run_stream(stream_pipe);
    if (app.got_subcommand(eval_cmd)) return run_eval(eval_args);
    if (app.got_subcommand(synth_cmd)) return run_synth(synth_args);
    if (app.got_subcommand(bench_cmd)) return run_bench(bench_args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return (code == 0) ? 0 : 2;
  } catch (const repcount::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

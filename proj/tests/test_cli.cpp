#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

#include "repcount/dataset.hpp"
#include "repcount/synthetic.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string cli_binary() {
  const char* env = std::getenv("REPCOUNT_CLI");
  REQUIRE_MESSAGE(env != nullptr,
                  "REPCOUNT_CLI must point at the built binary");
  return env;
}

struct RunResult {
  int exit_code = -1;
  std::string out;
};

// Runs the binary through the shell, capturing stdout; stderr is dropped
// unless the caller redirects it in `args`.
RunResult run_cli(const std::string& args,
                  const std::string& stdin_path = "") {
  std::string cmd = cli_binary() + " " + args;
  if (!stdin_path.empty()) cmd += " < " + stdin_path;
  cmd += " 2>/dev/null";

  RunResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  while (std::fgets(buf, sizeof(buf), pipe) != nullptr) result.out += buf;
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::vector<json> parse_lines(const std::string& text) {
  std::vector<json> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(json::parse(line));
  }
  return lines;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream body;
  body << in.rdbuf();
  return body.str();
}

// A deterministic single-person clip written through the library.
void write_clip(const std::string& path, double f0, int frames,
                std::uint64_t seed, const std::string& person) {
  repcount::SynthSpec spec;
  spec.freq_start = f0;
  spec.frames = frames;
  spec.seed = seed;
  spec.person_id = person;
  const auto seq = repcount::generate_synthetic(spec);
  std::vector<repcount::SkeletonFrame> out;
  for (std::size_t n = 0; n < seq.frames.size(); ++n) {
    repcount::SkeletonFrame f;
    f.timestamp = static_cast<double>(n) / 30.0;
    f.person_id = seq.person_id;
    f.joints = seq.frames[n];
    f.joint_count = seq.joint_count;
    f.dim = seq.dim;
    out.push_back(std::move(f));
  }
  repcount::write_generic_jsonl(out, path);
}

}  // namespace

TEST_CASE("synth writes a clip whose truth file the pipeline reproduces") {
  TempDir dir("repcount_cli_synth");
  const std::string clip = dir.file("clip.jsonl");

  auto synth = run_cli("synth --f0 0.02 --frames 1001 --seed 5 --out " + clip);
  REQUIRE(synth.exit_code == 0);

  const auto truth = json::parse(read_file(clip + ".truth"));
  CHECK(truth["count"] == 20);

  auto count = run_cli("count " + clip);
  REQUIRE(count.exit_code == 0);
  const auto lines = parse_lines(count.out);
  REQUIRE(lines.size() == 1);
  CHECK(lines[0]["person"] == "p0");
  CHECK(std::llabs(lines[0]["count"].get<long long>() - 20) <= 1);
  CHECK(lines[0]["frames"] == 1001);
}

TEST_CASE("synth reports chirp truth from the closed form") {
  TempDir dir("repcount_cli_chirp");
  const std::string clip = dir.file("chirp.jsonl");
  auto synth = run_cli("synth --chirp 0.02:0.04 --frames 2000 --seed 3 --out " +
                       clip);
  REQUIRE(synth.exit_code == 0);
  const auto truth = json::parse(read_file(clip + ".truth"));
  CHECK(truth["count"] == 59);
  CHECK(truth["freq_end"] == 0.04);
}

TEST_CASE("synth rejects frequencies beyond Nyquist") {
  CHECK(run_cli("synth --f0 0.9 --frames 100").exit_code == 2);
}

TEST_CASE("count reports interleaved people in first-appearance order") {
  TempDir dir("repcount_cli_two");
  write_clip(dir.file("zed.jsonl"), 4.0 / 256.0, 600, 21, "zed");
  write_clip(dir.file("amy.jsonl"), 8.0 / 256.0, 600, 22, "amy");

  // Interleave the two files line by line into one stream.
  std::ifstream a(dir.file("zed.jsonl")), b(dir.file("amy.jsonl"));
  std::ofstream mixed(dir.file("mixed.jsonl"));
  std::string la, lb;
  while (std::getline(a, la) && std::getline(b, lb)) {
    mixed << la << '\n' << lb << '\n';
  }
  mixed.close();

  auto result = run_cli("count " + dir.file("mixed.jsonl"));
  REQUIRE(result.exit_code == 0);
  const auto lines = parse_lines(result.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0]["person"] == "zed");
  CHECK(lines[1]["person"] == "amy");
}

TEST_CASE("count fails cleanly on a missing file") {
  CHECK(run_cli("count /definitely/not/here.jsonl").exit_code == 2);
}

TEST_CASE("count without inputs is a usage error") {
  CHECK(run_cli("count").exit_code == 2);
}

TEST_CASE("stream finals match batch count output exactly") {
  TempDir dir("repcount_cli_stream");
  write_clip(dir.file("a.jsonl"), 5.0 / 256.0, 700, 31, "runner");

  auto counted = run_cli("count " + dir.file("a.jsonl"));
  auto streamed = run_cli("stream", dir.file("a.jsonl"));
  REQUIRE(counted.exit_code == 0);
  REQUIRE(streamed.exit_code == 0);

  const auto count_lines = parse_lines(counted.out);
  const auto stream_lines = parse_lines(streamed.out);
  REQUIRE(!stream_lines.empty());
  // Mid-stream updates carry a freq field; final report lines do not.
  std::vector<json> finals;
  for (const auto& line : stream_lines) {
    if (!line.contains("freq")) finals.push_back(line);
  }
  REQUIRE(finals.size() == count_lines.size());
  CHECK(finals == count_lines);

  // Updates only appear once a full window has arrived.
  bool saw_update = false;
  for (const auto& line : stream_lines) {
    if (line.contains("freq")) {
      saw_update = true;
      CHECK(line["frames"].get<long long>() >= 256);
    }
  }
  CHECK(saw_update);
}

TEST_CASE("stream skips malformed lines and counts the rest") {
  TempDir dir("repcount_cli_skip");
  write_clip(dir.file("clean.jsonl"), 6.0 / 256.0, 600, 41, "p");

  // Same clip with rubbish spliced into the middle.
  std::ifstream in(dir.file("clean.jsonl"));
  std::ofstream out(dir.file("dirty.jsonl"));
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    out << line << '\n';
    if (++n == 300) out << "this is not json\n";
  }
  out.close();

  auto clean = run_cli("count " + dir.file("clean.jsonl"));
  auto dirty = run_cli("stream", dir.file("dirty.jsonl"));
  REQUIRE(clean.exit_code == 0);
  REQUIRE(dirty.exit_code == 0);

  std::vector<json> finals;
  for (const auto& l : parse_lines(dirty.out)) {
    if (!l.contains("freq")) finals.push_back(l);
  }
  CHECK(finals == parse_lines(clean.out));
}

TEST_CASE("stream with empty input emits nothing") {
  TempDir dir("repcount_cli_empty");
  std::ofstream(dir.file("empty.jsonl")).close();
  auto result = run_cli("stream", dir.file("empty.jsonl"));
  CHECK(result.exit_code == 0);
  CHECK(result.out.empty());
}

TEST_CASE("eval over the synthetic suite is deterministic") {
  const std::string args =
      "eval --dataset synth --clips 10 --seed 7 --grid 128x1,128x8 "
      "--format csv";
  auto first = run_cli(args);
  auto second = run_cli(args);
  REQUIRE(first.exit_code == 0);
  CHECK(first.out == second.out);
  CHECK(first.out.find("window,step,clip") == 0);
}

TEST_CASE("eval accepts both grid separators") {
  auto with_x = run_cli(
      "eval --dataset synth --clips 6 --seed 9 --grid 128x1 --format csv");
  auto with_colon = run_cli(
      "eval --dataset synth --clips 6 --seed 9 --grid 128:1 --format csv");
  REQUIRE(with_x.exit_code == 0);
  CHECK(with_x.out == with_colon.out);
}

TEST_CASE("eval emits machine-readable summaries on request") {
  auto result = run_cli(
      "eval --dataset synth --clips 8 --seed 3 --grid 256x1 --format jsonl");
  REQUIRE(result.exit_code == 0);
  const auto lines = parse_lines(result.out);
  REQUIRE(lines.size() == 1);
  CHECK(lines[0]["window"] == 256);
  CHECK(lines[0]["clips"] == 8);
  CHECK(lines[0]["oboa"].get<double>() >= 0.9);
}

TEST_CASE("eval rejects unknown datasets and broken grids") {
  CHECK(run_cli("eval --dataset nonsense").exit_code == 2);
  CHECK(run_cli("eval --dataset synth --grid banana").exit_code == 2);
  CHECK(run_cli("eval --dataset mmfit").exit_code == 2);  // no --root
}

TEST_CASE("bench reports latency quantiles") {
  auto result = run_cli("bench --frames 2000");
  REQUIRE(result.exit_code == 0);
  const auto lines = parse_lines(result.out);
  REQUIRE(lines.size() == 1);
  CHECK(lines[0]["frames"] == 2000);
  CHECK(lines[0]["median_us"].get<double>() > 0.0);
  CHECK(lines[0]["p99_us"].get<double>() >=
        lines[0]["median_us"].get<double>());
}

TEST_CASE("bench with zero frames is an empty report") {
  auto result = run_cli("bench --frames 0");
  REQUIRE(result.exit_code == 0);
  const auto lines = parse_lines(result.out);
  REQUIRE(lines.size() == 1);
  CHECK(lines[0]["frames"] == 0);
  CHECK_FALSE(lines[0].contains("median_us"));
}

TEST_CASE("a bare invocation prints usage and fails") {
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("--help").exit_code == 0);
}

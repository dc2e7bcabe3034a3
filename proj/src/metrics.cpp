#include "repcount/metrics.hpp"

#include <atomic>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <thread>

#include "repcount/engine.hpp"
#include "repcount/errors.hpp"

namespace repcount {

double mae_of_count(const std::vector<EvalRecord>& records) {
  if (records.empty()) {
    throw EmptyRecords("cannot average over zero records");
  }
  double sum = 0.0;
  for (const auto& r : records) {
    if (r.ground_truth == 0) {
      throw ZeroGroundTruth("clip '" + r.clip_id +
                            "' has zero ground truth; relative error is "
                            "undefined");
    }
    sum += std::abs(static_cast<double>(r.predicted - r.ground_truth)) /
           static_cast<double>(std::llabs(r.ground_truth));
  }
  return sum / static_cast<double>(records.size());
}

double oboa(const std::vector<EvalRecord>& records) {
  if (records.empty()) {
    throw EmptyRecords("cannot average over zero records");
  }
  std::size_t hits = 0;
  for (const auto& r : records) {
    if (std::llabs(r.predicted - r.ground_truth) <= 1) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(records.size());
}

namespace {

struct ClipOutcome {
  bool ok = false;
  bool fallback = false;
  EvalRecord record;
  std::string error;
};

ClipOutcome evaluate_clip(const LabeledClip& clip, const GridPoint& point,
                          CountingConfig cfg) {
  cfg.window = point.window;
  cfg.step = point.step;
  ClipOutcome outcome;
  outcome.record.clip_id = clip.clip_id;
  outcome.record.exercise_name = clip.exercise_name;
  outcome.record.ground_truth = clip.ground_truth_count;
  outcome.record.window = point.window;
  outcome.record.step = point.step;
  outcome.record.modality = (clip.sequence.dim == 2) ? "2d" : "3d";
  try {
    const CountReport report = count_sequence(clip.sequence, cfg);
    outcome.record.predicted = report.rounded_count;
    outcome.fallback =
        clip.sequence.size() < static_cast<std::size_t>(point.window);
    outcome.ok = true;
  } catch (const Error& e) {
    outcome.error = clip.clip_id + ": " + e.what();
  }
  return outcome;
}

}  // namespace

SweepResult sweep(const std::vector<LabeledClip>& clips,
                  const std::vector<GridPoint>& grid,
                  const CountingConfig& base_cfg, int threads) {
  if (clips.empty()) {
    throw EmptyRecords("sweep needs at least one clip");
  }
  if (grid.empty()) {
    throw ConfigError("sweep needs at least one grid point");
  }

  unsigned worker_count =
      (threads > 0) ? static_cast<unsigned>(threads)
                    : std::max(1u, std::thread::hardware_concurrency());
  const std::size_t jobs = clips.size() * grid.size();
  worker_count = static_cast<unsigned>(
      std::min<std::size_t>(worker_count, jobs));

  std::vector<ClipOutcome> outcomes(jobs);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < jobs;
         i = next.fetch_add(1)) {
      const std::size_t g = i / clips.size();
      const std::size_t c = i % clips.size();
      outcomes[i] = evaluate_clip(clips[c], grid[g], base_cfg);
    }
  };
  if (worker_count <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(worker_count);
    for (unsigned t = 0; t < worker_count; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  SweepResult result;
  result.configs.resize(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    ConfigResult& cfg_result = result.configs[g];
    cfg_result.config = grid[g];
    std::map<std::string, std::vector<EvalRecord>> by_exercise;
    for (std::size_t c = 0; c < clips.size(); ++c) {
      const ClipOutcome& outcome = outcomes[g * clips.size() + c];
      ++cfg_result.clip_count;
      if (!outcome.ok) {
        ++cfg_result.failure_count;
        cfg_result.failures.push_back(outcome.error);
        continue;
      }
      if (outcome.fallback) ++cfg_result.fallback_count;
      cfg_result.records.push_back(outcome.record);
      by_exercise[outcome.record.exercise_name].push_back(outcome.record);
    }
    if (!cfg_result.records.empty()) {
      cfg_result.overall_mae = mae_of_count(cfg_result.records);
      cfg_result.oboa = oboa(cfg_result.records);
      for (const auto& [name, recs] : by_exercise) {
        cfg_result.per_exercise_mae[name] = mae_of_count(recs);
      }
    }
  }
  return result;
}

void write_sweep_csv(const SweepResult& result, std::ostream& out) {
  out << "window,step,clip,exercise,modality,predicted,truth\n";
  for (const auto& cfg : result.configs) {
    for (const auto& r : cfg.records) {
      out << r.window << ',' << r.step << ',' << r.clip_id << ','
          << r.exercise_name << ',' << r.modality << ',' << r.predicted
          << ',' << r.ground_truth << '\n';
    }
  }
}

void write_sweep_table(const SweepResult& result, std::ostream& out) {
  out << std::left << std::setw(8) << "window" << std::setw(6) << "step"
      << std::right << std::setw(8) << "clips" << std::setw(10) << "MAE"
      << std::setw(8) << "OBOA" << std::setw(10) << "fallback"
      << std::setw(9) << "errors" << '\n';
  for (const auto& cfg : result.configs) {
    out << std::left << std::setw(8) << cfg.config.window << std::setw(6)
        << cfg.config.step << std::right << std::setw(8) << cfg.clip_count
        << std::setw(10) << std::fixed << std::setprecision(4)
        << cfg.overall_mae << std::setw(8) << std::setprecision(3)
        << cfg.oboa << std::setw(10) << cfg.fallback_count << std::setw(9)
        << cfg.failure_count << '\n';
  }
  out.unsetf(std::ios::fixed);
}

}  // namespace repcount

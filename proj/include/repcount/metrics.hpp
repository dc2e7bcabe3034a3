#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "repcount/synthetic.hpp"
#include "repcount/types.hpp"

namespace repcount {

/// One clip's evaluation outcome under one configuration.
struct EvalRecord {
  std::string clip_id;
  std::string exercise_name;
  long long predicted = 0;
  long long ground_truth = 0;
  int window = 0;
  int step = 0;
  std::string modality;  // "2d" or "3d"
};

/// Mean absolute error of the count, relative to ground truth:
/// mean over clips of |predicted - truth| / truth. Throws EmptyRecords on
/// an empty list and ZeroGroundTruth when a record's truth is zero.
double mae_of_count(const std::vector<EvalRecord>& records);

/// Off-by-one accuracy: the fraction of clips with |predicted - truth| <= 1.
double oboa(const std::vector<EvalRecord>& records);

/// One (window, step) configuration of a sweep.
struct GridPoint {
  int window = 256;
  int step = 1;
};

/// Aggregated evaluation of one grid point over a clip set.
struct ConfigResult {
  GridPoint config;
  std::map<std::string, double> per_exercise_mae;
  double overall_mae = 0.0;
  double oboa = 0.0;
  std::size_t clip_count = 0;
  std::size_t fallback_count = 0;  // clips shorter than the window
  std::size_t failure_count = 0;   // clips that raised an error
  std::vector<std::string> failures;
  std::vector<EvalRecord> records;
};

struct SweepResult {
  std::vector<ConfigResult> configs;
};

/// Counts every clip under every grid point. Clips are processed on a small
/// thread pool (threads <= 0 picks the hardware count); per-clip errors are
/// recorded in the result instead of aborting the sweep, and aggregation is
/// sequential so results are deterministic.
SweepResult sweep(const std::vector<LabeledClip>& clips,
                  const std::vector<GridPoint>& grid,
                  const CountingConfig& base_cfg, int threads = 0);

/// One CSV row per (config, clip): window,step,clip,exercise,modality,
/// predicted,truth.
void write_sweep_csv(const SweepResult& result, std::ostream& out);

/// Human-readable table: one row per config with MAE / OBOA columns.
void write_sweep_table(const SweepResult& result, std::ostream& out);

}  // namespace repcount

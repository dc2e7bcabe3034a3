#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "repcount/types.hpp"

namespace repcount {

/// Parameters for a synthetic exercise clip: a base pose whose joints
/// oscillate along fixed per-coordinate amplitudes, optionally sweeping the
/// frequency linearly (a chirp) and with Gaussian coordinate noise on top.
///
/// Frame 0 sits at an oscillation extreme — real repetitions start at a
/// turning point (top of a squat, arms down) — so the first frame is a
/// meaningful reference pose and one full cycle returns to it exactly once.
struct SynthSpec {
  int joint_count = 18;
  int dim = 3;
  std::vector<double> base_pose;  // length joint_count*dim, empty: random
  std::vector<double> amplitude;  // length joint_count*dim, empty: random
  double freq_start = 0.02;       // cycles per frame
  double freq_end = 0.0;          // <= 0: stationary at freq_start
  int frames = 1000;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  std::string person_id = "p0";
  double fps = 30.0;

  /// Throws InvalidSpec when any field is out of range.
  void validate() const;

  /// Accumulated phase in cycles after n frames (linear frequency sweep).
  double phase_at(int n) const;

  /// Whole repetitions completed over the clip: floor of the final phase.
  long long ground_truth() const;
};

/// A sequence paired with its annotation, the unit the evaluator consumes.
struct LabeledClip {
  SkeletonSequence sequence;
  std::string clip_id;
  std::string exercise_name;
  long long ground_truth_count = 0;
  std::string source;  // "synth", "mmfit", "uiprmd", ...
};

/// Deterministically renders the clip described by `spec`.
SkeletonSequence generate_synthetic(const SynthSpec& spec);

/// A reproducible batch of labeled clips for evaluation, with frequencies
/// drawn on the analysis grid of `window` (f0 = k/window) so ground truth
/// is recoverable to within one repetition, lengths in [4*window, 2000]
/// frames, and noise up to 5% of the oscillation amplitude.
std::vector<LabeledClip> synthetic_suite(int count, std::uint64_t seed,
                                         int window);

}  // namespace repcount

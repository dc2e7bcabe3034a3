#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace repcount {

/// One skeleton observation: a person's joint coordinates at one instant.
///
/// Coordinates are stored flat in joint-major order
/// [x0, y0, (z0,) x1, y1, (z1,) ...] so that a frame can be treated as a
/// single vector of length joint_count * dim.
struct SkeletonFrame {
  double timestamp = 0.0;
  std::string person_id;
  std::vector<double> joints;
  int joint_count = 0;
  int dim = 0;  // 2 or 3
};

/// A uniformly sampled sequence of poses for one person.
struct SkeletonSequence {
  std::string person_id;
  double fps = 0.0;
  int joint_count = 0;
  int dim = 0;
  std::vector<std::vector<double>> frames;  // each of length joint_count * dim

  std::size_t size() const { return frames.size(); }
  bool empty() const { return frames.empty(); }
};

/// Tunable parameters for the counting pipeline.
///
/// A min_freq <= 0 means "auto": use one full cycle per analysis window,
/// i.e. 1 / effective_window. Frequencies are in cycles per frame.
struct CountingConfig {
  int window = 256;
  int step = 1;
  bool center_frames = false;
  double min_freq = 0.0;
  double max_freq = 0.5;
  double motion_threshold = 4.0;
  int reference_index = 0;

  /// Throws ConfigError when a field is out of range.
  void validate() const;

  /// The low edge of the search band once the window length is known.
  double resolved_min_freq(int effective_window) const;
};

/// Dominant frequency estimate for one spectrogram column.
struct TrackPoint {
  double center_frame = 0.0;
  std::optional<double> freq;  // empty: no periodic motion detected
  double peak_magnitude = 0.0;
};

using FrequencyTrack = std::vector<TrackPoint>;

/// Final result of counting one person's sequence.
struct CountReport {
  std::string person_id;
  double raw_count = 0.0;
  long long rounded_count = 0;
  FrequencyTrack freq_track;
  std::size_t frames_processed = 0;
};

/// Throws on non-finite coordinates or an inconsistent joint layout.
void validate_frame(const SkeletonFrame& frame);

/// Validates every frame of a sequence; returns the input for chaining.
const SkeletonSequence& validate_sequence(const SkeletonSequence& seq);

/// Banker's rounding (round half to even), the rounding used for final
/// repetition counts so that x.5 raw values do not bias counts upward.
long long round_half_even(double value);

}  // namespace repcount

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "repcount/types.hpp"

namespace repcount {

/// Magnitude spectrogram of a 1-D signal under a sliding rectangular window.
///
/// Column m covers input samples [m*step, m*step + window). When the input
/// is shorter than the requested window the transform falls back to a single
/// full-length column and `window` holds that effective length.
struct Spectrogram {
  int window = 0;  // effective analysis length
  int step = 1;
  bool short_input = false;
  std::vector<std::vector<double>> columns;  // each of length window/2 + 1

  std::size_t bins() const { return columns.empty() ? 0 : columns[0].size(); }

  /// Input-sample index at the middle of column m.
  double center_frame(std::size_t m) const {
    return static_cast<double>(m) * step + (window - 1) / 2.0;
  }
};

/// Magnitudes |X_k| for k = 0 .. floor(n/2) of a real signal, computed with
/// an exact (untapered) transform. Throws WindowTooShort for n < 2.
std::vector<double> dft_magnitudes(std::span<const double> signal);

/// Sliding-window magnitude spectrogram of `signal` under `cfg`.
Spectrogram compute_spectrogram(std::span<const double> signal,
                                const CountingConfig& cfg);

/// Frequency (cycles/frame) of the strongest spectral peak inside the
/// configured band, or nullopt when the column shows no periodic motion,
/// i.e. the peak fails to dominate the band mean by `motion_threshold`.
/// Ties resolve to the lowest frequency. Bin 0 (DC) is never considered.
std::optional<double> dominant_frequency(std::span<const double> magnitudes,
                                         int window,
                                         const CountingConfig& cfg);

/// Dominant frequency of every spectrogram column, tagged with the column's
/// center frame.
FrequencyTrack frequency_track(const Spectrogram& spec,
                               const CountingConfig& cfg);

/// Repetition count as the integral of instantaneous frequency over time,
/// evaluated by midpoint quadrature: each column's frequency is held over
/// its span of frames, the first and last spans extending to the sequence
/// edges. Columns with no detected motion contribute zero. The spans
/// partition [0, total_frames] exactly. Throws EmptyTrack on an empty track.
double integrate_count(const FrequencyTrack& track, std::size_t total_frames);

/// Writes one CSV row per column: center_frame followed by the magnitudes.
void write_spectrogram_csv(const Spectrogram& spec, const std::string& path);

}  // namespace repcount

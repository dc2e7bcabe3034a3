#include "repcount/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>

#include "repcount/errors.hpp"

namespace repcount {
namespace {

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 Cooley-Tukey, in place. Requires power-of-two size.
void fft_radix2(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

// Direct O(n^2) transform for non-power-of-two lengths (short-input
// fallback); accumulates cos/sin separately for accuracy.
std::vector<double> dft_direct_magnitudes(std::span<const double> x) {
  const std::size_t n = x.size();
  const std::size_t bins = n / 2 + 1;
  std::vector<double> mags(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    double re = 0.0, im = 0.0;
    const double w = -2.0 * std::numbers::pi * static_cast<double>(k) /
                     static_cast<double>(n);
    for (std::size_t t = 0; t < n; ++t) {
      const double ang = w * static_cast<double>(t);
      re += x[t] * std::cos(ang);
      im += x[t] * std::sin(ang);
    }
    mags[k] = std::hypot(re, im);
  }
  return mags;
}

}  // namespace

std::vector<double> dft_magnitudes(std::span<const double> signal) {
  const std::size_t n = signal.size();
  if (n < 2) {
    throw WindowTooShort("transform needs at least 2 samples, got " +
                         std::to_string(n));
  }
  if (!is_power_of_two(n)) return dft_direct_magnitudes(signal);

  std::vector<std::complex<double>> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = {signal[i], 0.0};
  fft_radix2(a);
  std::vector<double> mags(n / 2 + 1);
  for (std::size_t k = 0; k < mags.size(); ++k) mags[k] = std::abs(a[k]);
  return mags;
}

Spectrogram compute_spectrogram(std::span<const double> signal,
                                const CountingConfig& cfg) {
  cfg.validate();
  const std::size_t n = signal.size();
  if (n < 2) {
    throw WindowTooShort("signal of " + std::to_string(n) +
                         " samples is too short to analyse");
  }

  Spectrogram spec;
  spec.step = cfg.step;
  if (n < static_cast<std::size_t>(cfg.window)) {
    // Shorter than one window: analyse the whole signal at once.
    spec.window = static_cast<int>(n);
    spec.short_input = true;
    spec.columns.push_back(dft_magnitudes(signal));
    return spec;
  }

  spec.window = cfg.window;
  const std::size_t w = static_cast<std::size_t>(cfg.window);
  const std::size_t s = static_cast<std::size_t>(cfg.step);
  const std::size_t m_count = (n - w) / s + 1;
  spec.columns.reserve(m_count);
  for (std::size_t m = 0; m < m_count; ++m) {
    spec.columns.push_back(dft_magnitudes(signal.subspan(m * s, w)));
  }
  return spec;
}

std::optional<double> dominant_frequency(std::span<const double> magnitudes,
                                         int window,
                                         const CountingConfig& cfg) {
  const double w = static_cast<double>(window);
  const double lo = cfg.resolved_min_freq(window);
  // DC never counts as motion, so the band starts at bin 1 at the earliest.
  std::size_t k_lo = static_cast<std::size_t>(std::ceil(lo * w - 1e-9));
  k_lo = std::max<std::size_t>(k_lo, 1);
  std::size_t k_hi =
      static_cast<std::size_t>(std::floor(cfg.max_freq * w + 1e-9));
  k_hi = std::min(k_hi, magnitudes.size() - 1);
  if (k_lo > k_hi) {
    throw EmptyBand("no spectral bins between " + std::to_string(lo) +
                    " and " + std::to_string(cfg.max_freq) +
                    " cycles/frame at window " + std::to_string(window));
  }

  std::size_t best = k_lo;
  double peak = magnitudes[k_lo];
  double sum = 0.0;
  for (std::size_t k = k_lo; k <= k_hi; ++k) {
    sum += magnitudes[k];
    if (magnitudes[k] > peak) {
      peak = magnitudes[k];
      best = k;
    }
  }
  const double mean = sum / static_cast<double>(k_hi - k_lo + 1);

  // A flat or noise-only column has no dominant peak. The absolute floor
  // guards constant signals whose residual band energy is pure roundoff.
  if (peak < cfg.motion_threshold * mean || peak < 1e-12 * w) {
    return std::nullopt;
  }
  return static_cast<double>(best) / w;
}

FrequencyTrack frequency_track(const Spectrogram& spec,
                               const CountingConfig& cfg) {
  FrequencyTrack track;
  track.reserve(spec.columns.size());
  for (std::size_t m = 0; m < spec.columns.size(); ++m) {
    TrackPoint p;
    p.center_frame = spec.center_frame(m);
    p.freq = dominant_frequency(spec.columns[m], spec.window, cfg);
    if (spec.columns[m].size() > 1) {
      p.peak_magnitude = *std::max_element(spec.columns[m].begin() + 1,
                                           spec.columns[m].end());
    }
    track.push_back(std::move(p));
  }
  return track;
}

double integrate_count(const FrequencyTrack& track,
                       std::size_t total_frames) {
  if (track.empty()) {
    throw EmptyTrack("cannot integrate an empty frequency track");
  }
  const std::size_t m = track.size();
  double count = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double span;
    if (m == 1) {
      span = static_cast<double>(total_frames);
    } else if (i == 0) {
      // Half a step to the right plus the run-in back to frame 0.
      span = track[0].center_frame +
             (track[1].center_frame - track[0].center_frame) / 2.0;
    } else if (i == m - 1) {
      span = static_cast<double>(total_frames) - track[i].center_frame +
             (track[i].center_frame - track[i - 1].center_frame) / 2.0;
    } else {
      span = (track[i + 1].center_frame - track[i - 1].center_frame) / 2.0;
    }
    if (track[i].freq) count += *track[i].freq * span;
  }
  return count;
}

void write_spectrogram_csv(const Spectrogram& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw MissingFile("cannot open '" + path + "' for writing");
  }
  for (std::size_t m = 0; m < spec.columns.size(); ++m) {
    out << spec.center_frame(m);
    for (double v : spec.columns[m]) out << ',' << v;
    out << '\n';
  }
}

}  // namespace repcount

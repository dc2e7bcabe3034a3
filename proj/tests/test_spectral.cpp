#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "repcount/errors.hpp"
#include "repcount/spectral.hpp"

using namespace repcount;

namespace {

std::vector<double> cosine_wave(int cycles, int length, double amp = 1.0) {
  std::vector<double> x(static_cast<std::size_t>(length));
  for (int t = 0; t < length; ++t) {
    x[static_cast<std::size_t>(t)] =
        amp * std::cos(2.0 * std::numbers::pi * cycles * t / length);
  }
  return x;
}

std::vector<double> random_signal(int length, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(static_cast<std::size_t>(length));
  for (double& v : x) v = u(rng);
  return x;
}

}  // namespace

TEST_CASE("transform of a constant signal is pure DC") {
  const std::vector<double> ones(8, 1.0);
  const auto mags = dft_magnitudes(ones);
  REQUIRE(mags.size() == 5);
  CHECK(mags[0] == doctest::Approx(8.0));
  for (std::size_t k = 1; k < mags.size(); ++k) {
    CHECK(mags[k] <= 1e-12);
  }
}

TEST_CASE("transform of an on-bin cosine concentrates at its bin") {
  const auto x = cosine_wave(2, 8);
  const auto mags = dft_magnitudes(x);
  CHECK(mags[2] == doctest::Approx(4.0));  // amplitude * n / 2
  CHECK(mags[0] <= 1e-12);
  CHECK(mags[1] <= 1e-12);
  CHECK(mags[3] <= 1e-12);
}

TEST_CASE("transform of a sine has the same magnitude as a cosine") {
  std::vector<double> x(16);
  for (int t = 0; t < 16; ++t) {
    x[static_cast<std::size_t>(t)] =
        std::sin(2.0 * std::numbers::pi * 3 * t / 16);
  }
  const auto mags = dft_magnitudes(x);
  CHECK(mags[3] == doctest::Approx(8.0));
}

TEST_CASE("transform agrees with the direct-summation oracle") {
  for (int n : {8, 128, 256}) {
    const auto x = random_signal(n, 1000 + static_cast<std::uint64_t>(n));
    const auto fast = dft_magnitudes(x);
    const auto naive = oracle::naive_dft_magnitudes(x);
    REQUIRE(fast.size() == naive.size());
    for (std::size_t k = 0; k < fast.size(); ++k) {
      const double tol = 1e-9 * std::max(1.0, naive[k]);
      CHECK(std::abs(fast[k] - naive[k]) <= tol);
    }
  }
}

TEST_CASE("non-power-of-two lengths agree with the oracle too") {
  for (int n : {7, 100, 255}) {
    const auto x = random_signal(n, 2000 + static_cast<std::uint64_t>(n));
    const auto direct = dft_magnitudes(x);
    const auto naive = oracle::naive_dft_magnitudes(x);
    REQUIRE(direct.size() == naive.size());
    for (std::size_t k = 0; k < direct.size(); ++k) {
      const double tol = 1e-9 * std::max(1.0, naive[k]);
      CHECK(std::abs(direct[k] - naive[k]) <= tol);
    }
  }
}

TEST_CASE("energy is conserved between time and frequency domains") {
  for (int n : {8, 128, 256}) {
    const auto x = random_signal(n, 3000 + static_cast<std::uint64_t>(n));
    const auto mags = dft_magnitudes(x);
    const double time_e = oracle::energy_time(x);
    const double freq_e = oracle::energy_freq_from_half(
        mags, static_cast<std::size_t>(n));
    CHECK(std::abs(time_e - freq_e) <= 1e-6 * time_e);
  }
}

TEST_CASE("too-short inputs are rejected") {
  CHECK_THROWS_AS(dft_magnitudes(std::vector<double>{}), WindowTooShort);
  CHECK_THROWS_AS(dft_magnitudes(std::vector<double>{1.0}), WindowTooShort);

  CountingConfig cfg;
  CHECK_THROWS_AS(compute_spectrogram(std::vector<double>{1.0}, cfg),
                  WindowTooShort);
}

TEST_CASE("spectrogram column count follows the sliding grid") {
  CountingConfig cfg;
  cfg.window = 256;

  SUBCASE("input exactly one window long") {
    cfg.step = 1;
    const auto spec = compute_spectrogram(random_signal(256, 41), cfg);
    CHECK(spec.columns.size() == 1);
    CHECK(spec.window == 256);
    CHECK_FALSE(spec.short_input);
  }
  SUBCASE("hop of four") {
    cfg.step = 4;
    const auto spec = compute_spectrogram(random_signal(300, 42), cfg);
    CHECK(spec.columns.size() == 12);  // (300-256)/4 + 1
    CHECK(spec.bins() == 129);
  }
  SUBCASE("unit hop") {
    cfg.step = 1;
    const auto spec = compute_spectrogram(random_signal(2000, 43), cfg);
    CHECK(spec.columns.size() == 1745);
  }
}

TEST_CASE("short inputs collapse to a single full-length column") {
  CountingConfig cfg;
  cfg.window = 256;
  const auto spec = compute_spectrogram(random_signal(100, 44), cfg);
  CHECK(spec.short_input);
  CHECK(spec.window == 100);
  CHECK(spec.columns.size() == 1);
  CHECK(spec.bins() == 51);
  CHECK(spec.center_frame(0) == doctest::Approx(49.5));
}

TEST_CASE("column centers sit mid-window") {
  CountingConfig cfg;
  cfg.window = 256;
  cfg.step = 4;
  const auto spec = compute_spectrogram(random_signal(300, 45), cfg);
  CHECK(spec.center_frame(0) == doctest::Approx(127.5));
  CHECK(spec.center_frame(3) == doctest::Approx(12 + 127.5));
}

TEST_CASE("dominant frequency finds an on-bin cosine exactly") {
  CountingConfig cfg;
  const auto x = cosine_wave(16, 256);
  const auto mags = dft_magnitudes(x);
  const auto f = dominant_frequency(mags, 256, cfg);
  REQUIRE(f.has_value());
  CHECK(*f == doctest::Approx(16.0 / 256.0));
}

TEST_CASE("dominant frequency is amplitude invariant") {
  CountingConfig cfg;
  const auto tiny = dft_magnitudes(cosine_wave(9, 128, 0.05));
  const auto huge = dft_magnitudes(cosine_wave(9, 128, 50.0));
  const auto f_tiny = dominant_frequency(tiny, 128, cfg);
  const auto f_huge = dominant_frequency(huge, 128, cfg);
  REQUIRE(f_tiny.has_value());
  REQUIRE(f_huge.has_value());
  CHECK(*f_tiny == *f_huge);
}

TEST_CASE("a constant signal reports no motion") {
  CountingConfig cfg;
  const std::vector<double> flat(256, 3.25);
  const auto mags = dft_magnitudes(flat);
  CHECK_FALSE(dominant_frequency(mags, 256, cfg).has_value());
}

TEST_CASE("a flat spectrum reports no motion") {
  CountingConfig cfg;  // motion_threshold 4
  // Hand-built column: all in-band bins equal, peak/mean ratio is 1.
  const std::vector<double> mags = {0.0, 2.0, 2.0, 2.0, 2.0};
  CHECK_FALSE(dominant_frequency(mags, 8, cfg).has_value());
}

TEST_CASE("dominant frequency ties resolve to the lower bin") {
  CountingConfig cfg;
  // Bins 3 and 5 tie at 12; in-band mean is 3, so 12 passes 4*mean.
  const std::vector<double> mags = {9.0, 0.0, 0.0, 12.0, 0.0,
                                    12.0, 0.0, 0.0, 0.0};
  const auto f = dominant_frequency(mags, 16, cfg);
  REQUIRE(f.has_value());
  CHECK(*f == doctest::Approx(3.0 / 16.0));
}

TEST_CASE("the DC bin is never selected") {
  CountingConfig cfg;
  // Huge DC, small genuine peak at bin 2.
  const std::vector<double> mags = {500.0, 0.0, 10.0, 0.0, 0.0};
  const auto f = dominant_frequency(mags, 8, cfg);
  REQUIRE(f.has_value());
  CHECK(*f == doctest::Approx(2.0 / 8.0));
}

TEST_CASE("an impossible band is an error") {
  CountingConfig cfg;
  cfg.min_freq = 0.3;
  cfg.max_freq = 0.35;  // with w=8: ceil(2.4)=3 > floor(2.8)=2
  const std::vector<double> mags = {1.0, 1.0, 1.0, 1.0, 1.0};
  CHECK_THROWS_AS(dominant_frequency(mags, 8, cfg), EmptyBand);
}

TEST_CASE("frequency track is constant for a stationary tone") {
  CountingConfig cfg;
  cfg.window = 64;
  cfg.step = 16;
  const auto x = cosine_wave(32, 256);  // 32 cycles over 256 = 8 per window
  const auto spec = compute_spectrogram(x, cfg);
  const auto track = frequency_track(spec, cfg);
  REQUIRE(track.size() == spec.columns.size());
  for (const auto& p : track) {
    REQUIRE(p.freq.has_value());
    CHECK(*p.freq == doctest::Approx(8.0 / 64.0));
    CHECK(p.peak_magnitude > 0.0);
  }
}

TEST_CASE("integral of a single-column track spans the whole clip") {
  FrequencyTrack track(1);
  track[0].center_frame = 127.5;
  track[0].freq = 0.02;
  CHECK(integrate_count(track, 1000) == doctest::Approx(20.0));
}

TEST_CASE("integrating an empty track is an error") {
  CHECK_THROWS_AS(integrate_count({}, 100), EmptyTrack);
}

TEST_CASE("columns with no motion contribute nothing") {
  FrequencyTrack track(3);
  track[0] = {10.0, std::nullopt, 0.0};
  track[1] = {20.0, std::nullopt, 0.0};
  track[2] = {30.0, std::nullopt, 0.0};
  CHECK(integrate_count(track, 100) == doctest::Approx(0.0));
}

TEST_CASE("quadrature spans partition the clip exactly") {
  // With every frequency pinned to 1 cycle/frame the integral must equal
  // the frame count, whatever the window/step geometry.
  for (int n : {256, 300, 999, 2000}) {
    for (int s : {1, 4, 32}) {
      CountingConfig cfg;
      cfg.window = 256;
      cfg.step = s;
      const auto spec = compute_spectrogram(random_signal(n, 77), cfg);
      FrequencyTrack track;
      for (std::size_t m = 0; m < spec.columns.size(); ++m) {
        track.push_back({spec.center_frame(m), 1.0, 1.0});
      }
      CHECK(integrate_count(track, static_cast<std::size_t>(n)) ==
            doctest::Approx(static_cast<double>(n)).epsilon(1e-12));
    }
  }
}

TEST_CASE("stationary tone count equals frequency times length") {
  CountingConfig cfg;
  cfg.window = 256;
  cfg.step = 8;
  const double f0 = 8.0 / 256.0;
  const auto x = cosine_wave(static_cast<int>(f0 * 2048), 2048);
  const auto spec = compute_spectrogram(x, cfg);
  const auto track = frequency_track(spec, cfg);
  CHECK(integrate_count(track, 2048) ==
        doctest::Approx(f0 * 2048).epsilon(1e-9));
}

TEST_CASE("chirp count approximates the closed-form phase") {
  // Frequency sweeps 0.02 -> 0.04 over 2000 frames; accumulated phase is
  // the target the spectral pipeline should recover within 2 cycles.
  const int n = 2000;
  const double f0 = 0.02, f1 = 0.04;
  std::vector<double> x(n);
  for (int t = 0; t < n; ++t) {
    x[static_cast<std::size_t>(t)] = std::cos(
        2.0 * std::numbers::pi * oracle::chirp_phase(f0, f1, t, n));
  }
  CountingConfig cfg;
  cfg.window = 256;
  cfg.step = 1;
  const auto spec = compute_spectrogram(x, cfg);
  const auto track = frequency_track(spec, cfg);
  const double raw = integrate_count(track, static_cast<std::size_t>(n));
  const double expected = oracle::chirp_phase(f0, f1, n - 1, n);
  CHECK(std::abs(raw - expected) <= 2.0);
}

TEST_CASE("spectrogram csv emits one row per column") {
  CountingConfig cfg;
  cfg.window = 64;
  cfg.step = 32;
  const auto spec = compute_spectrogram(random_signal(128, 91), cfg);
  const std::string path = "spec_test.csv";
  write_spectrogram_csv(spec, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == spec.columns.size());
  in.close();
  std::remove(path.c_str());
}

#include "repcount/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "repcount/errors.hpp"

namespace repcount {
namespace {

double rms(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace

void SynthSpec::validate() const {
  if (joint_count < 1) {
    throw InvalidSpec("joint_count must be >= 1");
  }
  if (dim != 2 && dim != 3) {
    throw InvalidSpec("dim must be 2 or 3");
  }
  if (frames < 2) {
    throw InvalidSpec("frames must be >= 2");
  }
  if (freq_start <= 0.0 || freq_start > 0.5) {
    throw InvalidSpec("freq_start must lie in (0, 0.5] cycles/frame");
  }
  if (freq_end > 0.5) {
    throw InvalidSpec("freq_end must not exceed 0.5 cycles/frame (Nyquist)");
  }
  if (noise_sigma < 0.0) {
    throw InvalidSpec("noise_sigma must be >= 0");
  }
  const std::size_t coords = static_cast<std::size_t>(joint_count) * dim;
  if (!base_pose.empty() && base_pose.size() != coords) {
    throw InvalidSpec("base_pose must hold joint_count*dim coordinates");
  }
  if (!amplitude.empty() && amplitude.size() != coords) {
    throw InvalidSpec("amplitude must hold joint_count*dim coordinates");
  }
  if (fps <= 0.0) {
    throw InvalidSpec("fps must be positive");
  }
}

double SynthSpec::phase_at(int n) const {
  const double fe = (freq_end > 0.0) ? freq_end : freq_start;
  const double t = static_cast<double>(n);
  // Linear sweep f(n) = f0 + (f1 - f0) * n / (N - 1), integrated.
  return freq_start * t +
         (fe - freq_start) * t * t / (2.0 * (frames - 1));
}

long long SynthSpec::ground_truth() const {
  return static_cast<long long>(std::floor(phase_at(frames - 1)));
}

SkeletonSequence generate_synthetic(const SynthSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  const std::size_t coords =
      static_cast<std::size_t>(spec.joint_count) * spec.dim;

  std::vector<double> base = spec.base_pose;
  if (base.empty()) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    base.resize(coords);
    for (double& b : base) b = u(rng);
  }
  std::vector<double> amp = spec.amplitude;
  if (amp.empty()) {
    std::uniform_real_distribution<double> u(0.05, 0.25);
    const double scale = std::max(rms(base), 1e-3);
    amp.resize(coords);
    for (double& a : amp) a = u(rng) * scale;
  }

  SkeletonSequence seq;
  seq.person_id = spec.person_id;
  seq.fps = spec.fps;
  seq.joint_count = spec.joint_count;
  seq.dim = spec.dim;
  seq.frames.resize(static_cast<std::size_t>(spec.frames));

  std::normal_distribution<double> noise(0.0, 1.0);
  for (int n = 0; n < spec.frames; ++n) {
    const double osc = std::cos(2.0 * std::numbers::pi * spec.phase_at(n));
    auto& frame = seq.frames[static_cast<std::size_t>(n)];
    frame.resize(coords);
    for (std::size_t c = 0; c < coords; ++c) {
      frame[c] = base[c] + amp[c] * osc;
      if (spec.noise_sigma > 0.0) {
        frame[c] += spec.noise_sigma * noise(rng);
      }
    }
  }
  return seq;
}

std::vector<LabeledClip> synthetic_suite(int count, std::uint64_t seed,
                                         int window) {
  if (count < 1) {
    throw InvalidSpec("suite needs at least one clip");
  }
  if (window < 8) {
    throw InvalidSpec("suite window must be >= 8");
  }
  std::mt19937_64 master(seed);
  const int k_max = static_cast<int>(std::floor(0.1 * window));
  std::uniform_int_distribution<int> pick_k(2, std::max(2, k_max));
  const int n_lo = 4 * window;
  const int n_hi = std::max(n_lo, 2000);
  std::uniform_int_distribution<int> pick_n(n_lo, n_hi);
  std::uniform_real_distribution<double> pick_rel_sigma(0.0, 0.05);

  std::vector<LabeledClip> clips;
  clips.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    SynthSpec spec;
    spec.seed = master();
    spec.freq_start = static_cast<double>(pick_k(master)) / window;
    spec.frames = pick_n(master);
    spec.person_id = "p" + std::to_string(i);

    // Draw the pose here so the noise level can track its amplitude.
    std::mt19937_64 pose_rng(spec.seed);
    std::uniform_real_distribution<double> u_base(-1.0, 1.0);
    std::uniform_real_distribution<double> u_amp(0.05, 0.25);
    const std::size_t coords =
        static_cast<std::size_t>(spec.joint_count) * spec.dim;
    spec.base_pose.resize(coords);
    for (double& b : spec.base_pose) b = u_base(pose_rng);
    const double scale = std::max(rms(spec.base_pose), 1e-3);
    spec.amplitude.resize(coords);
    double amp_mean = 0.0;
    for (double& a : spec.amplitude) {
      a = u_amp(pose_rng) * scale;
      amp_mean += a;
    }
    amp_mean /= static_cast<double>(coords);
    spec.noise_sigma = pick_rel_sigma(master) * amp_mean;

    LabeledClip clip;
    clip.clip_id = "synth-" + std::to_string(i);
    clip.exercise_name = "synthetic";
    clip.ground_truth_count = spec.ground_truth();
    clip.source = "synth";
    clip.sequence = generate_synthetic(spec);
    clips.push_back(std::move(clip));
  }
  return clips;
}

}  // namespace repcount

#include "repcount/engine.hpp"

#include <cmath>
#include <span>
#include <utility>

#include "repcount/errors.hpp"
#include "repcount/similarity.hpp"
#include "repcount/spectral.hpp"

namespace repcount {
namespace {

constexpr double kNormFloor = 1e-12;

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::vector<double> prepare(const SkeletonFrame& frame, bool center) {
  if (center) return centered_frame(frame.joints, frame.dim);
  return frame.joints;
}

}  // namespace

PersonSession::PersonSession(CountingConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  if (cfg_.reference_index != 0) {
    throw ConfigError(
        "streaming sessions can only reference the first frame "
        "(reference_index 0)");
  }
  ring_.resize(static_cast<std::size_t>(cfg_.window));
  scratch_.resize(static_cast<std::size_t>(cfg_.window));
}

StreamUpdate PersonSession::push(const SkeletonFrame& frame) {
  if (finalized_) {
    throw SessionFinalized("push after finalize on session for '" +
                           person_id_ + "'");
  }
  validate_frame(frame);

  if (!started_) {
    person_id_ = frame.person_id;
    joint_count_ = frame.joint_count;
    dim_ = frame.dim;
    reference_ = prepare(frame, cfg_.center_frames);
    if (norm(reference_) < kNormFloor) {
      // Leave the session unstarted so a caller that skips bad frames can
      // retry with the next one as the reference.
      throw ZeroNormFrame("reference frame has zero norm");
    }
    started_ = true;
  } else {
    if (frame.person_id != person_id_) {
      throw PersonMismatch("session for '" + person_id_ +
                           "' received a frame for '" + frame.person_id +
                           "'");
    }
    if (frame.joint_count != joint_count_ || frame.dim != dim_) {
      throw InconsistentJointLayout(
          "frame layout changed mid-stream for '" + person_id_ + "'");
    }
  }

  const std::vector<double> cur = prepare(frame, cfg_.center_frames);
  double sim;
  if (norm(cur) < kNormFloor) {
    sim = last_sim_;  // stalled sensor: hold the previous similarity
  } else {
    sim = cosine_similarity(reference_, cur);
  }
  last_sim_ = sim;

  const std::size_t w = static_cast<std::size_t>(cfg_.window);
  const std::size_t s = static_cast<std::size_t>(cfg_.step);
  ring_[frames_seen_ % w] = sim;
  ++frames_seen_;

  StreamUpdate update;
  update.person_id = person_id_;
  if (frames_seen_ >= w && (frames_seen_ - w) % s == 0) {
    complete_column((frames_seen_ - w) / s);
    update.column_completed = true;
    update.latest_freq = track_.back().freq;
  }
  update.frames_processed = frames_seen_;
  update.raw_count = running_raw_;
  update.rounded_count = round_half_even(running_raw_);
  return update;
}

void PersonSession::complete_column(std::size_t column_index) {
  const std::size_t w = static_cast<std::size_t>(cfg_.window);
  const std::size_t s = static_cast<std::size_t>(cfg_.step);
  const std::size_t start = column_index * s;
  for (std::size_t i = 0; i < w; ++i) {
    scratch_[i] = ring_[(start + i) % w];
  }

  TrackPoint point;
  point.center_frame = static_cast<double>(start) + (cfg_.window - 1) / 2.0;
  const std::vector<double> mags = dft_magnitudes(scratch_);
  point.freq = dominant_frequency(mags, cfg_.window, cfg_);
  if (mags.size() > 1) {
    point.peak_magnitude = mags[1];
    for (std::size_t k = 2; k < mags.size(); ++k) {
      point.peak_magnitude = std::max(point.peak_magnitude, mags[k]);
    }
  }

  // Midpoint rule, provisionally: the first column covers everything back
  // to frame 0, each later column adds one step. finalize() replaces this
  // with the exact integral, which also extends the tail to the stream end.
  const double f = point.freq.value_or(0.0);
  if (track_.empty()) {
    running_raw_ = f * (point.center_frame + static_cast<double>(s) / 2.0);
  } else {
    running_raw_ += f * static_cast<double>(s);
  }
  track_.push_back(std::move(point));
}

const CountReport& PersonSession::finalize() {
  if (finalized_) return report_;
  finalized_ = true;

  report_.person_id = person_id_;
  report_.frames_processed = frames_seen_;
  if (frames_seen_ < 2) {
    // Nothing to analyse; a lone frame holds no motion.
    return report_;
  }

  if (track_.empty()) {
    // Stream ended before one full window: analyse what we buffered.
    std::span<const double> buffered(ring_.data(), frames_seen_);
    const Spectrogram spec = compute_spectrogram(buffered, cfg_);
    track_ = frequency_track(spec, cfg_);
  }
  report_.raw_count = integrate_count(track_, frames_seen_);
  report_.rounded_count = round_half_even(report_.raw_count);
  report_.freq_track = track_;
  return report_;
}

MultiPersonRouter::MultiPersonRouter(CountingConfig cfg)
    : cfg_(std::move(cfg)) {
  cfg_.validate();
}

StreamUpdate MultiPersonRouter::step(const SkeletonFrame& frame) {
  PersonSession* session = find(frame.person_id);
  if (session == nullptr) {
    order_.push_back(frame.person_id);
    sessions_.push_back(std::make_unique<PersonSession>(cfg_));
    session = sessions_.back().get();
  }
  return session->push(frame);
}

std::vector<CountReport> MultiPersonRouter::finalize_all() {
  std::vector<CountReport> reports;
  reports.reserve(sessions_.size());
  for (auto& session : sessions_) {
    reports.push_back(session->finalize());
  }
  return reports;
}

PersonSession* MultiPersonRouter::find(const std::string& person_id) {
  for (std::size_t i = 0; i < order_.size(); ++i) {
    if (order_[i] == person_id) return sessions_[i].get();
  }
  return nullptr;
}

CountReport count_sequence(const SkeletonSequence& seq,
                           const CountingConfig& cfg) {
  validate_sequence(seq);
  cfg.validate();

  CountReport report;
  report.person_id = seq.person_id;
  report.frames_processed = seq.frames.size();
  if (seq.frames.size() < 2) {
    return report;
  }

  const SimilaritySignal sig = reference_signal(seq, cfg);
  const Spectrogram spec = compute_spectrogram(sig.values, cfg);
  report.freq_track = frequency_track(spec, cfg);
  report.raw_count = integrate_count(report.freq_track, seq.frames.size());
  report.rounded_count = round_half_even(report.raw_count);
  return report;
}

}  // namespace repcount

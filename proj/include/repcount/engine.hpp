#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "repcount/types.hpp"

namespace repcount {

/// Snapshot returned after each pushed frame.
///
/// `raw_count` is the provisional integral over completed analysis columns;
/// it can only grow. `latest_freq` is set when this push completed a column
/// that detected periodic motion.
struct StreamUpdate {
  std::string person_id;
  std::size_t frames_processed = 0;
  double raw_count = 0.0;
  long long rounded_count = 0;
  std::optional<double> latest_freq;
  bool column_completed = false;
};

/// Incremental counter for a single person's frame stream.
///
/// Keeps only the reference frame and a ring buffer of the last `window`
/// similarity values, so memory stays O(window + columns) regardless of
/// stream length. finalize() yields a report identical to running the batch
/// pipeline over the same frames.
class PersonSession {
 public:
  explicit PersonSession(CountingConfig cfg);

  /// Feeds one frame; the first frame becomes the reference.
  /// Throws PersonMismatch when the frame belongs to someone else and
  /// SessionFinalized after finalize() has been called.
  StreamUpdate push(const SkeletonFrame& frame);

  /// Completes the stream and returns the final report. Idempotent.
  const CountReport& finalize();

  const std::string& person_id() const { return person_id_; }
  std::size_t frames_seen() const { return frames_seen_; }
  bool finalized() const { return finalized_; }

 private:
  void complete_column(std::size_t column_index);

  CountingConfig cfg_;
  std::string person_id_;
  bool started_ = false;
  bool finalized_ = false;
  int joint_count_ = 0;
  int dim_ = 0;
  std::vector<double> reference_;
  std::vector<double> ring_;     // last `window` similarity values
  std::vector<double> scratch_;  // linearised window for the transform
  double last_sim_ = 1.0;
  std::size_t frames_seen_ = 0;
  FrequencyTrack track_;
  double running_raw_ = 0.0;
  CountReport report_;
};

/// Demultiplexes an interleaved multi-person frame stream into independent
/// per-person sessions. Frames for one person never influence another.
class MultiPersonRouter {
 public:
  explicit MultiPersonRouter(CountingConfig cfg);

  /// Routes one frame to its person's session, creating it on first sight.
  StreamUpdate step(const SkeletonFrame& frame);

  /// Finalizes every session, reporting in first-appearance order.
  std::vector<CountReport> finalize_all();

  /// Person ids in first-appearance order.
  const std::vector<std::string>& person_order() const { return order_; }

  /// Session for a person, or nullptr when unseen.
  PersonSession* find(const std::string& person_id);

 private:
  CountingConfig cfg_;
  std::vector<std::string> order_;
  std::vector<std::unique_ptr<PersonSession>> sessions_;  // parallel to order_
};

/// Batch convenience: count one fully buffered sequence.
CountReport count_sequence(const SkeletonSequence& seq,
                           const CountingConfig& cfg);

}  // namespace repcount

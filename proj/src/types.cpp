#include "repcount/types.hpp"

#include <cmath>
#include <sstream>

#include "repcount/errors.hpp"

namespace repcount {

void CountingConfig::validate() const {
  if (window < 2) {
    throw ConfigError("window must be >= 2, got " + std::to_string(window));
  }
  if (step < 1) {
    throw ConfigError("step must be >= 1, got " + std::to_string(step));
  }
  if (max_freq <= 0.0 || max_freq > 0.5) {
    throw ConfigError("max_freq must lie in (0, 0.5], got " +
                      std::to_string(max_freq));
  }
  if (min_freq > max_freq) {
    throw ConfigError("min_freq exceeds max_freq");
  }
  if (motion_threshold < 1.0) {
    throw ConfigError("motion_threshold must be >= 1, got " +
                      std::to_string(motion_threshold));
  }
  if (reference_index < 0) {
    throw ConfigError("reference_index must be >= 0");
  }
}

double CountingConfig::resolved_min_freq(int effective_window) const {
  if (min_freq > 0.0) return min_freq;
  return 1.0 / static_cast<double>(effective_window);
}

void validate_frame(const SkeletonFrame& frame) {
  if (frame.dim != 2 && frame.dim != 3) {
    throw InconsistentJointLayout("frame dim must be 2 or 3, got " +
                                  std::to_string(frame.dim));
  }
  if (frame.joint_count <= 0) {
    throw InconsistentJointLayout("frame joint_count must be positive");
  }
  const std::size_t expect =
      static_cast<std::size_t>(frame.joint_count) * frame.dim;
  if (frame.joints.size() != expect) {
    std::ostringstream msg;
    msg << "frame holds " << frame.joints.size() << " coordinates, expected "
        << expect << " (" << frame.joint_count << " joints x " << frame.dim
        << ")";
    throw InconsistentJointLayout(msg.str());
  }
  for (double v : frame.joints) {
    if (!std::isfinite(v)) {
      throw NonFiniteCoordinate("frame for person '" + frame.person_id +
                                "' contains a non-finite coordinate");
    }
  }
}

const SkeletonSequence& validate_sequence(const SkeletonSequence& seq) {
  if (seq.frames.empty()) {
    throw EmptySequence("sequence for person '" + seq.person_id +
                        "' has no frames");
  }
  if (seq.dim != 2 && seq.dim != 3) {
    throw InconsistentJointLayout("sequence dim must be 2 or 3, got " +
                                  std::to_string(seq.dim));
  }
  if (seq.joint_count <= 0) {
    throw InconsistentJointLayout("sequence joint_count must be positive");
  }
  const std::size_t expect =
      static_cast<std::size_t>(seq.joint_count) * seq.dim;
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    const auto& f = seq.frames[i];
    if (f.size() != expect) {
      std::ostringstream msg;
      msg << "frame " << i << " holds " << f.size()
          << " coordinates, expected " << expect;
      throw InconsistentJointLayout(msg.str());
    }
    for (double v : f) {
      if (!std::isfinite(v)) {
        throw NonFiniteCoordinate("frame " + std::to_string(i) +
                                  " contains a non-finite coordinate");
      }
    }
  }
  return seq;
}

long long round_half_even(double value) {
  const double floor_v = std::floor(value);
  const double diff = value - floor_v;
  long long base = static_cast<long long>(floor_v);
  if (diff > 0.5) return base + 1;
  if (diff < 0.5) return base;
  // exactly halfway: pick the even neighbour
  return (base % 2 == 0) ? base : base + 1;
}

}  // namespace repcount

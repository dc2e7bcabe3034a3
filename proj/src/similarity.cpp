#include "repcount/similarity.hpp"

#include <cmath>
#include <fstream>

#include "repcount/errors.hpp"

namespace repcount {
namespace {

constexpr double kNormFloor = 1e-12;

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::vector<double> prepared(const std::vector<double>& joints, int dim,
                             bool center) {
  if (center) return centered_frame(joints, dim);
  return joints;
}

}  // namespace

double cosine_similarity(std::span<const double> a,
                         std::span<const double> b) {
  if (a.size() != b.size()) {
    throw LengthMismatch("cosine_similarity: lengths " +
                         std::to_string(a.size()) + " and " +
                         std::to_string(b.size()) + " differ");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  na = std::sqrt(na);
  nb = std::sqrt(nb);
  if (na < kNormFloor || nb < kNormFloor) {
    throw ZeroNormFrame("cosine_similarity: zero-norm operand");
  }
  return dot / (na * nb);
}

std::vector<double> centered_frame(std::span<const double> joints, int dim) {
  std::vector<double> out(joints.begin(), joints.end());
  if (dim <= 0 || joints.empty()) return out;
  const std::size_t joint_count = joints.size() / dim;
  for (int axis = 0; axis < dim; ++axis) {
    double mean = 0.0;
    for (std::size_t j = 0; j < joint_count; ++j) {
      mean += joints[j * dim + axis];
    }
    mean /= static_cast<double>(joint_count);
    for (std::size_t j = 0; j < joint_count; ++j) {
      out[j * dim + axis] -= mean;
    }
  }
  return out;
}

SimilaritySignal reference_signal(const SkeletonSequence& seq,
                                  const CountingConfig& cfg) {
  validate_sequence(seq);
  cfg.validate();
  const std::size_t n = seq.frames.size();
  if (static_cast<std::size_t>(cfg.reference_index) >= n) {
    throw ConfigError("reference_index " +
                      std::to_string(cfg.reference_index) +
                      " out of range for " + std::to_string(n) + " frames");
  }

  const std::vector<double> ref =
      prepared(seq.frames[cfg.reference_index], seq.dim, cfg.center_frames);
  if (norm(ref) < kNormFloor) {
    throw ZeroNormFrame("reference frame has zero norm");
  }

  SimilaritySignal sig;
  sig.reference_index = cfg.reference_index;
  sig.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<double> cur =
        prepared(seq.frames[i], seq.dim, cfg.center_frames);
    if (norm(cur) < kNormFloor) {
      // Stalled / dropped frame: hold the last similarity value.
      sig.values[i] = (i == 0) ? 1.0 : sig.values[i - 1];
      continue;
    }
    sig.values[i] = cosine_similarity(ref, cur);
  }
  return sig;
}

SimilarityMatrix self_similarity_matrix(const SkeletonSequence& seq,
                                        const CountingConfig& cfg) {
  validate_sequence(seq);
  cfg.validate();
  const std::size_t n = seq.frames.size();

  // Substitute zero-norm frames at the frame level (not the value level) so
  // the matrix stays exactly symmetric.
  std::vector<std::vector<double>> frames(n);
  std::ptrdiff_t first_valid = -1;
  for (std::size_t i = 0; i < n; ++i) {
    frames[i] = prepared(seq.frames[i], seq.dim, cfg.center_frames);
    if (first_valid < 0 && norm(frames[i]) >= kNormFloor) {
      first_valid = static_cast<std::ptrdiff_t>(i);
    }
  }
  if (first_valid < 0) {
    throw ZeroNormFrame("every frame in the sequence has zero norm");
  }
  for (std::ptrdiff_t i = 0; i < first_valid; ++i) {
    frames[i] = frames[first_valid];
  }
  for (std::size_t i = static_cast<std::size_t>(first_valid) + 1; i < n; ++i) {
    if (norm(frames[i]) < kNormFloor) frames[i] = frames[i - 1];
  }

  SimilarityMatrix m;
  m.size = n;
  m.data.assign(n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    m.data[a * n + a] = 1.0;
    for (std::size_t b = a + 1; b < n; ++b) {
      const double s = cosine_similarity(frames[a], frames[b]);
      m.data[a * n + b] = s;
      m.data[b * n + a] = s;
    }
  }
  return m;
}

void write_similarity_csv(const SimilarityMatrix& matrix,
                          const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw MissingFile("cannot open '" + path + "' for writing");
  }
  for (std::size_t a = 0; a < matrix.size; ++a) {
    for (std::size_t b = 0; b < matrix.size; ++b) {
      if (b) out << ',';
      out << matrix.at(a, b);
    }
    out << '\n';
  }
}

}  // namespace repcount

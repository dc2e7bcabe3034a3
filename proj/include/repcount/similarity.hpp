#pragma once

#include <span>
#include <string>
#include <vector>

#include "repcount/types.hpp"

namespace repcount {

/// Per-frame cosine similarity against a fixed reference frame.
struct SimilaritySignal {
  std::vector<double> values;  // one entry per input frame, in [-1, 1]
  int reference_index = 0;
};

/// Dense symmetric frame-by-frame similarity matrix, row-major.
struct SimilarityMatrix {
  std::size_t size = 0;
  std::vector<double> data;  // size * size entries

  double at(std::size_t a, std::size_t b) const { return data[a * size + b]; }
};

/// Cosine similarity of two equal-length coordinate vectors.
///
/// Throws LengthMismatch when the spans differ in length and ZeroNormFrame
/// when either vector has (near-)zero norm, since the angle is then
/// undefined.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// Subtracts the per-axis mean joint position, removing global translation.
std::vector<double> centered_frame(std::span<const double> joints, int dim);

/// Similarity of every frame against the configured reference frame.
///
/// Zero-norm frames other than the reference carry the previous similarity
/// value forward (a stalled sensor should not fabricate motion); a zero-norm
/// reference is fatal because nothing can be compared against it.
SimilaritySignal reference_signal(const SkeletonSequence& seq,
                                  const CountingConfig& cfg);

/// Full self-similarity matrix of a sequence. Zero-norm frames are replaced
/// by the nearest preceding valid frame (the first valid frame for a
/// zero-norm prefix) so the result stays exactly symmetric.
SimilarityMatrix self_similarity_matrix(const SkeletonSequence& seq,
                                        const CountingConfig& cfg);

/// Writes a matrix as plain comma-separated rows, no header.
void write_similarity_csv(const SimilarityMatrix& matrix,
                          const std::string& path);

}  // namespace repcount

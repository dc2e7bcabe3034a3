#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace repcount {

/// A numeric array loaded from a .npy file, converted to double and stored
/// row-major (C order) regardless of the on-disk element type.
struct NpyArray {
  std::vector<std::size_t> shape;
  std::vector<double> data;

  std::size_t size() const { return data.size(); }
};

/// Reads a NumPy .npy file (format versions 1.0 and 2.0). Supports
/// little-endian f8/f4/i8/i4 elements in C order; anything else raises
/// ParseError. A missing file raises MissingFile.
NpyArray load_npy(const std::string& path);

}  // namespace repcount

#pragma once

// Independent reference implementations used only by the tests. These are
// deliberately written in the most literal way possible (no shared code
// with the library) so an agreement check between the two is meaningful.

#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <vector>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

// Textbook O(n^2) discrete Fourier transform, accumulating each bin with
// std::complex arithmetic. Returns magnitudes for bins 0..floor(n/2).
inline std::vector<double> naive_dft_magnitudes(
    const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> mags(n / 2 + 1);
  for (std::size_t k = 0; k < mags.size(); ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
      const double ang =
          -2.0 * kPi * static_cast<double>(k) * static_cast<double>(t) /
          static_cast<double>(n);
      acc += x[t] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    mags[k] = std::abs(acc);
  }
  return mags;
}

// Sum of squares in the time domain, for Parseval checks.
inline double energy_time(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

// Sum over the FULL spectrum of |X_k|^2 / n, reconstructing the upper half
// from conjugate symmetry of a real signal.
inline double energy_freq_from_half(const std::vector<double>& half_mags,
                                    std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < half_mags.size(); ++k) {
    const double m2 = half_mags[k] * half_mags[k];
    const bool self_conjugate = (k == 0) || (2 * k == n);
    s += self_conjugate ? m2 : 2.0 * m2;
  }
  return s / static_cast<double>(n);
}

// Phase (in cycles) accumulated by frame n of a linear chirp that sweeps
// f0 -> f1 over N frames, written directly from the integral of
// f(t) = f0 + (f1 - f0) t / (N - 1).
inline double chirp_phase(double f0, double f1, int n, int total) {
  const double t = static_cast<double>(n);
  return f0 * t + 0.5 * (f1 - f0) * t * t / (total - 1);
}

// Applies a 3-D rotation (given as a row-major 3x3 matrix) to every joint
// of a flat [x,y,z,...] coordinate vector.
inline std::vector<double> rotate_joints(const std::vector<double>& joints,
                                         const double r[9]) {
  std::vector<double> out(joints.size());
  for (std::size_t j = 0; j + 2 < joints.size(); j += 3) {
    const double x = joints[j], y = joints[j + 1], z = joints[j + 2];
    out[j] = r[0] * x + r[1] * y + r[2] * z;
    out[j + 1] = r[3] * x + r[4] * y + r[5] * z;
    out[j + 2] = r[6] * x + r[7] * y + r[8] * z;
  }
  return out;
}

// Row-major rotation matrix from ZYX Euler angles.
inline void euler_rotation(double yaw, double pitch, double roll,
                           double out[9]) {
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  const double cp = std::cos(pitch), sp = std::sin(pitch);
  const double cr = std::cos(roll), sr = std::sin(roll);
  out[0] = cy * cp;
  out[1] = cy * sp * sr - sy * cr;
  out[2] = cy * sp * cr + sy * sr;
  out[3] = sy * cp;
  out[4] = sy * sp * sr + cy * cr;
  out[5] = sy * sp * cr - cy * sr;
  out[6] = -sp;
  out[7] = cp * sr;
  out[8] = cp * cr;
}

// Plain cosine similarity written independently of the library.
inline double cosine(const std::vector<double>& a,
                     const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace oracle

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace fcs {

/// Real-valued H x W image with intensities nominally in [0,1].
struct ImageGrid {
  int height = 0;
  int width = 0;
  std::vector<double> pixels;  // row-major

  ImageGrid() = default;
  ImageGrid(int h, int w, double fill = 0.0)
      : height(h), width(w), pixels(static_cast<size_t>(h) * w, fill) {
    if (h < 1 || w < 1) throw std::invalid_argument("ImageGrid: nonpositive shape");
  }

  double& at(int r, int c) { return pixels[static_cast<size_t>(r) * width + c]; }
  double at(int r, int c) const { return pixels[static_cast<size_t>(r) * width + c]; }
  size_t size() const { return pixels.size(); }
};

/// Complex H x W k-space grid, centered layout (DC at row H/2, col W/2).
struct KGrid {
  int height = 0;
  int width = 0;
  std::vector<std::complex<double>> coeffs;  // row-major, centered
  bool from_real_image = false;

  KGrid() = default;
  KGrid(int h, int w)
      : height(h), width(w), coeffs(static_cast<size_t>(h) * w) {
    if (h < 1 || w < 1) throw std::invalid_argument("KGrid: nonpositive shape");
  }

  std::complex<double>& at(int r, int c) { return coeffs[static_cast<size_t>(r) * width + c]; }
  std::complex<double> at(int r, int c) const { return coeffs[static_cast<size_t>(r) * width + c]; }
  size_t size() const { return coeffs.size(); }
};

/// Nonnegative per-location map over k-space (variance, weights, ...).
struct RealGrid {
  int height = 0;
  int width = 0;
  std::vector<double> values;  // row-major, centered

  RealGrid() = default;
  RealGrid(int h, int w, double fill = 0.0)
      : height(h), width(w), values(static_cast<size_t>(h) * w, fill) {
    if (h < 1 || w < 1) throw std::invalid_argument("RealGrid: nonpositive shape");
  }

  double& at(int r, int c) { return values[static_cast<size_t>(r) * width + c]; }
  double at(int r, int c) const { return values[static_cast<size_t>(r) * width + c]; }
  size_t size() const { return values.size(); }
};

using UncertaintyMap = RealGrid;

/// RealGrid with unit L2 norm; produced by normalize_uncertainty.
struct NormalizedUncertainty : RealGrid {
  NormalizedUncertainty() = default;
  explicit NormalizedUncertainty(RealGrid g) : RealGrid(std::move(g)) {}
};

// Centered index i <-> signed frequency offset f = i - n/2.
inline int freq_offset(int i, int n) { return i - n / 2; }

// Centered index of the -f partner; self-paired at DC and Nyquist rows/cols.
inline int conj_partner(int i, int n) { return (2 * (n / 2) - i + n) % n; }

/// Radial frequency with each axis normalized to its Nyquist offset,
/// so |f| = 1 at the axis edge and sqrt(2) at the grid corner.
inline double radial_freq(int r, int c, int h, int w) {
  const double fy = h > 1 ? static_cast<double>(freq_offset(r, h)) / (h / 2) : 0.0;
  const double fx = w > 1 ? static_cast<double>(freq_offset(c, w)) / (w / 2) : 0.0;
  return std::sqrt(fy * fy + fx * fx);
}

inline double l2_norm_sq(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

inline double l2_norm_sq(const std::vector<std::complex<double>>& v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return s;
}

}  // namespace fcs

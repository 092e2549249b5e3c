#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fcs/grid.hpp"

namespace fcs {

namespace detail {

inline void require_same_image_shape(const ImageGrid& a, const ImageGrid& b, const char* who) {
  if (a.height != b.height || a.width != b.width)
    throw std::invalid_argument(std::string(who) + ": shape mismatch");
}

// Inclusive 2-D prefix sums with a zero border row/column.
inline std::vector<double> prefix_sum(const std::vector<double>& v, int h, int w,
                                      const std::vector<double>* other = nullptr) {
  std::vector<double> p(static_cast<size_t>(h + 1) * (w + 1), 0.0);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      const size_t i = static_cast<size_t>(r) * w + c;
      const double x = other ? v[i] * (*other)[i] : v[i];
      p[static_cast<size_t>(r + 1) * (w + 1) + c + 1] =
          x + p[static_cast<size_t>(r) * (w + 1) + c + 1] +
          p[static_cast<size_t>(r + 1) * (w + 1) + c] -
          p[static_cast<size_t>(r) * (w + 1) + c];
    }
  return p;
}

inline double box_sum(const std::vector<double>& p, int w, int r0, int c0, int size) {
  const int r1 = r0 + size, c1 = c0 + size;
  return p[static_cast<size_t>(r1) * (w + 1) + c1] - p[static_cast<size_t>(r0) * (w + 1) + c1] -
         p[static_cast<size_t>(r1) * (w + 1) + c0] + p[static_cast<size_t>(r0) * (w + 1) + c0];
}

}  // namespace detail

/// 20 log10(MAX) - 10 log10(MSE), MAX taken from the reference image.
/// Identical images return +infinity.
inline double psnr(const ImageGrid& reference, const ImageGrid& test) {
  detail::require_same_image_shape(reference, test, "psnr");
  const double max_val = *std::max_element(reference.pixels.begin(), reference.pixels.end());
  if (max_val <= 0.0) throw std::invalid_argument("psnr: reference has no positive pixel");
  double mse = 0.0;
  for (size_t i = 0; i < reference.pixels.size(); ++i) {
    const double d = reference.pixels[i] - test.pixels[i];
    mse += d * d;
  }
  mse /= static_cast<double>(reference.pixels.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(max_val) - 10.0 * std::log10(mse);
}

/// Mean SSIM over all valid 7x7 uniform windows, c1 = (0.01 MAX)^2,
/// c2 = (0.03 MAX)^2 with MAX from the reference. Not symmetric in its
/// arguments when the images have different maxima.
inline double ssim(const ImageGrid& reference, const ImageGrid& test) {
  detail::require_same_image_shape(reference, test, "ssim");
  constexpr int kWin = 7;
  const int h = reference.height, w = reference.width;
  if (h < kWin || w < kWin) throw std::invalid_argument("ssim: image smaller than 7x7 window");
  const double max_val = *std::max_element(reference.pixels.begin(), reference.pixels.end());
  const double c1 = (0.01 * max_val) * (0.01 * max_val);
  const double c2 = (0.03 * max_val) * (0.03 * max_val);

  const auto px = detail::prefix_sum(reference.pixels, h, w);
  const auto py = detail::prefix_sum(test.pixels, h, w);
  const auto pxx = detail::prefix_sum(reference.pixels, h, w, &reference.pixels);
  const auto pyy = detail::prefix_sum(test.pixels, h, w, &test.pixels);
  const auto pxy = detail::prefix_sum(reference.pixels, h, w, &test.pixels);

  const double inv_n = 1.0 / (kWin * kWin);
  double acc = 0.0;
  int windows = 0;
  for (int r = 0; r + kWin <= h; ++r)
    for (int c = 0; c + kWin <= w; ++c) {
      const double mx = detail::box_sum(px, w, r, c, kWin) * inv_n;
      const double my = detail::box_sum(py, w, r, c, kWin) * inv_n;
      const double vx = detail::box_sum(pxx, w, r, c, kWin) * inv_n - mx * mx;
      const double vy = detail::box_sum(pyy, w, r, c, kWin) * inv_n - my * my;
      const double cxy = detail::box_sum(pxy, w, r, c, kWin) * inv_n - mx * my;
      acc += ((2.0 * mx * my + c1) * (2.0 * cxy + c2)) /
             ((mx * mx + my * my + c1) * (vx + vy + c2));
      ++windows;
    }
  return acc / windows;
}

/// The pipeline loss everywhere: l(I, I') = 1 - SSIM(I, I').
inline double ssim_loss(const ImageGrid& reference, const ImageGrid& test) {
  return 1.0 - ssim(reference, test);
}

}  // namespace fcs

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace fcs {

namespace detail {

inline constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;

inline void haar_rows(std::vector<double>& a, int full_w, int h, int w, bool forward) {
  std::vector<double> tmp(w);
  for (int r = 0; r < h; ++r) {
    double* row = a.data() + static_cast<size_t>(r) * full_w;
    if (forward) {
      for (int c = 0; c < w / 2; ++c) {
        tmp[c] = (row[2 * c] + row[2 * c + 1]) * kInvSqrt2;
        tmp[w / 2 + c] = (row[2 * c] - row[2 * c + 1]) * kInvSqrt2;
      }
    } else {
      for (int c = 0; c < w / 2; ++c) {
        tmp[2 * c] = (row[c] + row[w / 2 + c]) * kInvSqrt2;
        tmp[2 * c + 1] = (row[c] - row[w / 2 + c]) * kInvSqrt2;
      }
    }
    for (int c = 0; c < w; ++c) row[c] = tmp[c];
  }
}

inline void haar_cols(std::vector<double>& a, int full_w, int h, int w, bool forward) {
  std::vector<double> tmp(h);
  for (int c = 0; c < w; ++c) {
    if (forward) {
      for (int r = 0; r < h / 2; ++r) {
        const double x = a[static_cast<size_t>(2 * r) * full_w + c];
        const double y = a[static_cast<size_t>(2 * r + 1) * full_w + c];
        tmp[r] = (x + y) * kInvSqrt2;
        tmp[h / 2 + r] = (x - y) * kInvSqrt2;
      }
    } else {
      for (int r = 0; r < h / 2; ++r) {
        const double s = a[static_cast<size_t>(r) * full_w + c];
        const double d = a[static_cast<size_t>(h / 2 + r) * full_w + c];
        tmp[2 * r] = (s + d) * kInvSqrt2;
        tmp[2 * r + 1] = (s - d) * kInvSqrt2;
      }
    }
    for (int r = 0; r < h; ++r) a[static_cast<size_t>(r) * full_w + c] = tmp[r];
  }
}

}  // namespace detail

inline void check_haar_shape(int h, int w, int levels) {
  if (levels < 1) throw std::invalid_argument("haar: levels must be >= 1");
  const int div = 1 << levels;
  if (h % div != 0 || w % div != 0)
    throw std::invalid_argument("haar: 2^levels must divide both dimensions");
}

/// Orthonormal multi-level 2-D Haar transform, in place on a row-major buffer.
inline void haar_forward(std::vector<double>& data, int h, int w, int levels) {
  check_haar_shape(h, w, levels);
  int ch = h, cw = w;
  for (int lvl = 0; lvl < levels; ++lvl) {
    detail::haar_rows(data, w, ch, cw, true);
    detail::haar_cols(data, w, ch, cw, true);
    ch /= 2;
    cw /= 2;
  }
}

inline void haar_inverse(std::vector<double>& data, int h, int w, int levels) {
  check_haar_shape(h, w, levels);
  for (int lvl = levels - 1; lvl >= 0; --lvl) {
    const int ch = h >> lvl, cw = w >> lvl;
    detail::haar_cols(data, w, ch, cw, false);
    detail::haar_rows(data, w, ch, cw, false);
  }
}

}  // namespace fcs

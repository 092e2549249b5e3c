#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fcs/grid.hpp"
#include "fcs/rng.hpp"
#include "fcs/wavelet.hpp"

namespace fcs {

enum class PhantomKind { stripes_h, stripes_v, haar_sparse, smooth_blobs };

namespace detail {

inline void normalize_to_unit(ImageGrid& img) {
  double lo = img.pixels[0], hi = img.pixels[0];
  for (double p : img.pixels) {
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  const double span = hi > lo ? hi - lo : 1.0;
  for (auto& p : img.pixels) p = (p - lo) / span;
}

// Soft square wave: strong fundamental inside the LF block plus decaying
// harmonics outside it.
inline double soft_square(double phase, double sharpness) {
  return std::tanh(sharpness * std::sin(phase));
}

inline ImageGrid stripes(int h, int w, uint64_t seed, bool horizontal) {
  Rng rng(seed);
  const int n = horizontal ? h : w;
  const double period = n / (2.0 + 2.0 * rng.uniform());  // 2-4 cycles across
  const double phase0 = rng.uniform() * 2.0 * 3.14159265358979323846;
  const double sharpness = 2.5 + 2.0 * rng.uniform();
  const double tilt = 0.15 * (rng.uniform() - 0.5);  // mild cross-axis ramp
  ImageGrid img(h, w);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      const int along = horizontal ? r : c;
      const int across = horizontal ? c : r;
      const double phase = 2.0 * 3.14159265358979323846 * along / period + phase0;
      img.at(r, c) = soft_square(phase, sharpness) + tilt * across / std::max(1, h + w);
    }
  normalize_to_unit(img);
  return img;
}

inline ImageGrid haar_sparse(int h, int w, uint64_t seed) {
  const int levels = 3;
  check_haar_shape(h, w, levels);
  Rng rng(seed);
  std::vector<double> coeffs(static_cast<size_t>(h) * w, 0.0);
  constexpr int kNonzero = 32;
  for (int i = 0; i < kNonzero; ++i) {
    const size_t idx = rng.below(coeffs.size());
    coeffs[idx] = (rng.uniform() < 0.5 ? -1.0 : 1.0) * (0.5 + rng.uniform());
  }
  haar_inverse(coeffs, h, w, levels);
  ImageGrid img(h, w);
  img.pixels = std::move(coeffs);
  normalize_to_unit(img);
  return img;
}

inline ImageGrid smooth_blobs(int h, int w, uint64_t seed) {
  Rng rng(seed);
  const int n_blobs = 3 + static_cast<int>(rng.below(3));
  ImageGrid img(h, w, 0.0);
  for (int b = 0; b < n_blobs; ++b) {
    const double cy = rng.uniform() * h;
    const double cx = rng.uniform() * w;
    const double sy = (0.08 + 0.12 * rng.uniform()) * h;
    const double sx = (0.08 + 0.12 * rng.uniform()) * w;
    const double amp = 0.4 + 0.6 * rng.uniform();
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c) {
        const double dy = (r - cy) / sy, dx = (c - cx) / sx;
        img.at(r, c) += amp * std::exp(-0.5 * (dy * dy + dx * dx));
      }
  }
  normalize_to_unit(img);
  return img;
}

}  // namespace detail

/// Deterministic synthetic image for the given kind and seed.
inline ImageGrid make_phantom(PhantomKind kind, int height, int width, uint64_t seed) {
  if (height < 1 || width < 1) throw std::invalid_argument("make_phantom: nonpositive shape");
  switch (kind) {
    case PhantomKind::stripes_h:
      return detail::stripes(height, width, seed, true);
    case PhantomKind::stripes_v:
      return detail::stripes(height, width, seed, false);
    case PhantomKind::haar_sparse:
      return detail::haar_sparse(height, width, seed);
    case PhantomKind::smooth_blobs:
      return detail::smooth_blobs(height, width, seed);
  }
  throw std::invalid_argument("make_phantom: unknown kind");
}

}  // namespace fcs

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "fcs/grid.hpp"
#include "fcs/mask.hpp"

namespace fcs {
namespace detail {

using cd = std::complex<double>;
inline constexpr double kPi = 3.141592653589793238462643383279502884;

inline bool is_pow2(size_t n) { return n && (n & (n - 1)) == 0; }

// Iterative radix-2 Cooley-Tukey, unnormalized. sign = -1 forward, +1 inverse.
inline void fft_pow2(std::vector<cd>& a, int sign) {
  const size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * kPi / static_cast<double>(len);
    const cd wlen(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      cd w(1.0, 0.0);
      for (size_t j = 0; j < len / 2; ++j) {
        const cd u = a[i + j];
        const cd v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

// Bluestein chirp-z for arbitrary length, unnormalized.
inline void fft_bluestein(std::vector<cd>& a, int sign) {
  const size_t n = a.size();
  size_t m = 1;
  while (m < 2 * n - 1) m <<= 1;

  // chirp[k] = exp(sign * i * pi * k^2 / n); k^2 mod 2n keeps the angle exact.
  std::vector<cd> chirp(n);
  for (size_t k = 0; k < n; ++k) {
    const uint64_t k2 = (static_cast<uint64_t>(k) * k) % (2 * n);
    const double ang = sign * kPi * static_cast<double>(k2) / static_cast<double>(n);
    chirp[k] = cd(std::cos(ang), std::sin(ang));
  }

  std::vector<cd> u(m, cd(0, 0)), v(m, cd(0, 0));
  for (size_t k = 0; k < n; ++k) u[k] = a[k] * chirp[k];
  v[0] = std::conj(chirp[0]);
  for (size_t k = 1; k < n; ++k) v[k] = v[m - k] = std::conj(chirp[k]);

  fft_pow2(u, -1);
  fft_pow2(v, -1);
  for (size_t k = 0; k < m; ++k) u[k] *= v[k];
  fft_pow2(u, +1);
  const double inv_m = 1.0 / static_cast<double>(m);
  for (size_t k = 0; k < n; ++k) a[k] = u[k] * inv_m * chirp[k];
}

inline void fft_1d(std::vector<cd>& a, int sign) {
  if (a.size() <= 1) return;
  if (is_pow2(a.size()))
    fft_pow2(a, sign);
  else
    fft_bluestein(a, sign);
}

// In-place 2-D transform of an unshifted row-major buffer, unnormalized.
inline void fft_2d(std::vector<cd>& data, int h, int w, int sign) {
  std::vector<cd> line(static_cast<size_t>(w));
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) line[c] = data[static_cast<size_t>(r) * w + c];
    fft_1d(line, sign);
    for (int c = 0; c < w; ++c) data[static_cast<size_t>(r) * w + c] = line[c];
  }
  line.assign(static_cast<size_t>(h), cd(0, 0));
  for (int c = 0; c < w; ++c) {
    for (int r = 0; r < h; ++r) line[r] = data[static_cast<size_t>(r) * w + c];
    fft_1d(line, sign);
    for (int r = 0; r < h; ++r) data[static_cast<size_t>(r) * w + c] = line[r];
  }
}

inline size_t shifted_index(int r, int c, int h, int w) {
  // unshifted (r, c) -> centered position
  const int rc = (r + h / 2) % h;
  const int cc = (c + w / 2) % w;
  return static_cast<size_t>(rc) * w + cc;
}

}  // namespace detail

/// Unitary centered 2-D DFT; Parseval holds exactly up to rounding.
inline KGrid dft2_unitary(const ImageGrid& img) {
  const int h = img.height, w = img.width;
  std::vector<detail::cd> buf(img.size());
  for (size_t i = 0; i < img.size(); ++i) buf[i] = detail::cd(img.pixels[i], 0.0);
  detail::fft_2d(buf, h, w, -1);
  const double scale = 1.0 / std::sqrt(static_cast<double>(img.size()));
  KGrid out(h, w);
  out.from_real_image = true;
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      out.coeffs[detail::shifted_index(r, c, h, w)] = buf[static_cast<size_t>(r) * w + c] * scale;
  return out;
}

/// Inverse of dft2_unitary; keeps the real part. The largest imaginary
/// magnitude seen is written to *imag_residual when given.
inline ImageGrid idft2_unitary(const KGrid& k, double* imag_residual = nullptr) {
  const int h = k.height, w = k.width;
  std::vector<detail::cd> buf(k.size());
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      buf[static_cast<size_t>(r) * w + c] = k.coeffs[detail::shifted_index(r, c, h, w)];
  detail::fft_2d(buf, h, w, +1);
  const double scale = 1.0 / std::sqrt(static_cast<double>(k.size()));
  ImageGrid out(h, w);
  double max_imag = 0.0;
  for (size_t i = 0; i < buf.size(); ++i) {
    const detail::cd z = buf[i] * scale;
    out.pixels[i] = z.real();
    max_imag = std::max(max_imag, std::abs(z.imag()));
  }
  if (imag_residual) *imag_residual = max_imag;
  return out;
}

/// Componentwise M*k: keeps acquired coefficients, zeroes the rest.
inline KGrid apply_mask(const KGrid& k, const SamplingMask& m) {
  require_same_shape(m, k.height, k.width, "apply_mask");
  const auto cells = m.cell_lookup();
  KGrid out = k;
  for (size_t i = 0; i < out.coeffs.size(); ++i)
    if (!cells[i]) out.coeffs[i] = 0.0;
  return out;
}

/// Inverse-transform of masked data. Requires the input to be consistent
/// with the mask (zero outside the acquired set).
inline ImageGrid zero_fill_recon(const KGrid& masked_k, const SamplingMask& m,
                                 double* imag_residual = nullptr) {
  require_same_shape(m, masked_k.height, masked_k.width, "zero_fill_recon");
  const auto cells = m.cell_lookup();
  for (size_t i = 0; i < masked_k.coeffs.size(); ++i)
    if (!cells[i] && std::abs(masked_k.coeffs[i]) > 1e-12)
      throw std::invalid_argument("zero_fill_recon: nonzero coefficient at unacquired location");
  return idft2_unitary(masked_k, imag_residual);
}

}  // namespace fcs

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fcs/grid.hpp"
#include "fcs/mask.hpp"
#include "fcs/metrics.hpp"
#include "fcs/transforms.hpp"
#include "fcs/wavelet.hpp"

namespace fcs {

enum class ReconVariant { zero_fill, fista };

struct ReconParams {
  ReconVariant variant = ReconVariant::zero_fill;
  double lambda = 0.0;  // l1 weight, fista only
  int iters = 100;
  int wavelet_levels = 3;

  void validate() const {
    if (!std::isfinite(lambda) || lambda < 0.0)
      throw std::invalid_argument("ReconParams: lambda must be finite and >= 0");
    if (iters < 1) throw std::invalid_argument("ReconParams: iters must be >= 1");
    if (wavelet_levels < 1) throw std::invalid_argument("ReconParams: wavelet_levels must be >= 1");
  }
};

namespace detail {

inline void soft_threshold(std::vector<double>& v, double t) {
  for (auto& x : v) {
    if (x > t)
      x -= t;
    else if (x < -t)
      x += t;
    else
      x = 0.0;
  }
}

struct FistaProblem {
  const KGrid& data;                  // masked k-space
  const std::vector<uint8_t>& cells;  // acquired lookup
  int h, w, levels;
  double lambda;

  // 0.5 ||M F x - y||^2 + lambda ||W x||_1
  double objective(const std::vector<double>& x) const {
    ImageGrid img{};
    img.height = h;
    img.width = w;
    img.pixels = x;
    const KGrid kx = dft2_unitary(img);
    double fid = 0.0;
    for (size_t i = 0; i < kx.coeffs.size(); ++i)
      if (cells[i]) fid += std::norm(kx.coeffs[i] - data.coeffs[i]);
    double l1 = 0.0;
    if (lambda > 0.0) {
      std::vector<double> wx = x;
      haar_forward(wx, h, w, levels);
      for (double c : wx) l1 += std::abs(c);
    }
    return 0.5 * fid + lambda * l1;
  }

  // Re(F^H M (M F x - y)); the forward operator has unit norm, step 1 is safe.
  std::vector<double> gradient(const std::vector<double>& x) const {
    ImageGrid img{};
    img.height = h;
    img.width = w;
    img.pixels = x;
    KGrid r = dft2_unitary(img);
    for (size_t i = 0; i < r.coeffs.size(); ++i)
      r.coeffs[i] = cells[i] ? r.coeffs[i] - data.coeffs[i] : 0.0;
    return idft2_unitary(r).pixels;
  }

  std::vector<double> prox_step(const std::vector<double>& y) const {
    const auto g = gradient(y);
    std::vector<double> z(y.size());
    for (size_t i = 0; i < y.size(); ++i) z[i] = y[i] - g[i];
    haar_forward(z, h, w, levels);
    soft_threshold(z, lambda);
    haar_inverse(z, h, w, levels);
    return z;
  }
};

// Monotone FISTA: keeps the best of the proximal point and the previous
// iterate, so the objective never increases.
inline std::vector<double> mfista(const FistaProblem& p, int iters) {
  const size_t n = static_cast<size_t>(p.h) * p.w;
  std::vector<double> x(n, 0.0), y(n, 0.0);
  double obj_x = p.objective(x);
  double t = 1.0;
  for (int it = 0; it < iters; ++it) {
    const std::vector<double> z = p.prox_step(y);
    const double obj_z = p.objective(z);
    std::vector<double> x_new;
    double obj_new;
    if (obj_z <= obj_x) {
      x_new = z;
      obj_new = obj_z;
    } else {
      x_new = x;
      obj_new = obj_x;
    }
    const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    for (size_t i = 0; i < n; ++i)
      y[i] = x_new[i] + (t / t_new) * (z[i] - x_new[i]) + ((t - 1.0) / t_new) * (x_new[i] - x[i]);
    x = std::move(x_new);
    obj_x = obj_new;
    t = t_new;
  }
  return x;
}

}  // namespace detail

/// h(k; M, theta): zero-filling or FISTA l1-wavelet reconstruction.
inline ImageGrid reconstruct(const KGrid& masked_k, const SamplingMask& m,
                             const ReconParams& theta) {
  theta.validate();
  require_same_shape(m, masked_k.height, masked_k.width, "reconstruct");
  if (theta.variant == ReconVariant::zero_fill) return zero_fill_recon(masked_k, m);

  check_haar_shape(masked_k.height, masked_k.width, theta.wavelet_levels);
  const auto cells = m.cell_lookup();
  for (size_t i = 0; i < masked_k.coeffs.size(); ++i)
    if (!cells[i] && std::abs(masked_k.coeffs[i]) > 1e-12)
      throw std::invalid_argument("reconstruct: nonzero coefficient at unacquired location");
  detail::FistaProblem problem{masked_k, cells, masked_k.height, masked_k.width,
                               theta.wavelet_levels, theta.lambda};
  ImageGrid out(masked_k.height, masked_k.width);
  out.pixels = detail::mfista(problem, theta.iters);
  return out;
}

/// Exhaustive grid search for the empirical-risk minimizer
/// (1/N) sum (1 - SSIM); ties go to the earlier grid entry.
inline std::pair<ReconParams, double> tune_theta(const std::vector<KGrid>& training_k,
                                                 const std::vector<ImageGrid>& training_img,
                                                 const SamplingMask& m,
                                                 const std::vector<ReconParams>& grid) {
  if (grid.empty()) throw std::invalid_argument("tune_theta: empty candidate grid");
  if (training_k.empty() || training_k.size() != training_img.size())
    throw std::invalid_argument("tune_theta: empty or mismatched training set");
  ReconParams best = grid[0];
  double best_risk = std::numeric_limits<double>::max();
  for (const auto& cand : grid) {
    double risk = 0.0;
    for (size_t i = 0; i < training_k.size(); ++i) {
      const ImageGrid rec = reconstruct(apply_mask(training_k[i], m), m, cand);
      risk += ssim_loss(training_img[i], rec);
    }
    risk /= static_cast<double>(training_k.size());
    if (risk < best_risk) {
      best_risk = risk;
      best = cand;
    }
  }
  return {best, best_risk};
}

/// Default 13-point geometric lambda grid, 1e-4 .. 1e-1.
inline std::vector<ReconParams> default_fista_grid(int iters = 100, int levels = 3) {
  std::vector<ReconParams> grid;
  for (int i = 0; i < 13; ++i) {
    ReconParams p;
    p.variant = ReconVariant::fista;
    p.lambda = 1e-4 * std::pow(10.0, 3.0 * i / 12.0);
    p.iters = iters;
    p.wavelet_levels = levels;
    grid.push_back(p);
  }
  return grid;
}

}  // namespace fcs

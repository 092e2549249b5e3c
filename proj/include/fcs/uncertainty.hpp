#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "fcs/grid.hpp"
#include "fcs/mask.hpp"
#include "fcs/sampler.hpp"
#include "fcs/transforms.hpp"

namespace fcs {

/// Unbiased per-location sample variance of the ensemble's k-space
/// coefficients: (1/(S-1)) sum_s |F(x_s)_l - mean_l|^2.
inline UncertaintyMap kspace_sample_variance(const SampleEnsemble& ens) {
  const int S = static_cast<int>(ens.samples.size());
  if (S < 2) throw std::invalid_argument("kspace_sample_variance: need at least 2 samples");
  const int h = ens.samples[0].height, w = ens.samples[0].width;

  std::vector<KGrid> spectra;
  spectra.reserve(S);
  for (const auto& img : ens.samples) {
    if (img.height != h || img.width != w)
      throw std::invalid_argument("kspace_sample_variance: ragged ensemble");
    spectra.push_back(dft2_unitary(img));
  }

  std::vector<std::complex<double>> mean(static_cast<size_t>(h) * w, 0.0);
  for (const auto& k : spectra)
    for (size_t i = 0; i < mean.size(); ++i) mean[i] += k.coeffs[i];
  for (auto& m : mean) m /= static_cast<double>(S);

  UncertaintyMap v(h, w);
  for (const auto& k : spectra)
    for (size_t i = 0; i < mean.size(); ++i) v.values[i] += std::norm(k.coeffs[i] - mean[i]);
  for (auto& x : v.values) x /= static_cast<double>(S - 1);
  return v;
}

/// u = v / ||v||_2. Throws on an all-zero map (degenerate ensemble).
inline NormalizedUncertainty normalize_uncertainty(const UncertaintyMap& v) {
  const double norm = std::sqrt(l2_norm_sq(v.values));
  if (norm <= 0.0)
    throw std::invalid_argument("normalize_uncertainty: zero uncertainty map");
  RealGrid out = v;
  for (auto& x : out.values) x /= norm;
  return NormalizedUncertainty(std::move(out));
}

/// Sum of variances outside the mask: the sample-variance surrogate for the
/// mean squared error of the unacquired coefficients.
inline double estimate_unacquired_mse(const UncertaintyMap& v, const SamplingMask& m) {
  require_same_shape(m, v.height, v.width, "estimate_unacquired_mse");
  const auto cells = m.cell_lookup();
  double s = 0.0;
  for (size_t i = 0; i < v.values.size(); ++i)
    if (!cells[i]) s += v.values[i];
  return s;
}

struct TheoremS1Report {
  double lhs = 0.0;  // Monte-Carlo Var[(F^H x)]_2 for iid unit-variance x
  double rhs = 0.0;  // |(F^H componentwise-variance)_2|
  bool distinct = false;
};

/// Demonstrates that the componentwise variance in one domain is not the
/// inverse DFT of the componentwise variance in the other: for iid real
/// vectors the first quantity is 1 and the second is 0 at index 2.
inline TheoremS1Report theorem_s1_check(int length, int trials, uint64_t seed,
                                        double tolerance = 0.25) {
  if (length < 1) throw std::invalid_argument("theorem_s1_check: length must be positive");
  if (trials < 2) throw std::invalid_argument("theorem_s1_check: need at least 2 trials");
  TheoremS1Report rep;
  if (length == 1) {
    // 1-point DFT is the identity; both routes coincide.
    rep.lhs = rep.rhs = 1.0;
    rep.distinct = false;
    return rep;
  }
  const int L = length;
  const int idx = 1;  // second component
  Rng rng(seed);

  std::complex<double> y_sum = 0.0;
  double y_sqsum = 0.0;
  std::vector<double> x_sum(L, 0.0), x_sqsum(L, 0.0);
  std::vector<double> x(L);
  const double inv_sqrt_l = 1.0 / std::sqrt(static_cast<double>(L));
  for (int t = 0; t < trials; ++t) {
    for (int l = 0; l < L; ++l) {
      x[l] = rng.normal();
      x_sum[l] += x[l];
      x_sqsum[l] += x[l] * x[l];
    }
    // y = (F^H x)_idx, unitary inverse DFT row
    std::complex<double> y = 0.0;
    for (int l = 0; l < L; ++l) {
      const double ang = 2.0 * detail::kPi * l * idx / L;
      y += x[l] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    y *= inv_sqrt_l;
    y_sum += y;
    y_sqsum += std::norm(y);
  }
  const double t = static_cast<double>(trials);
  rep.lhs = (y_sqsum - std::norm(y_sum) / t) / (t - 1.0);

  std::complex<double> rhs = 0.0;
  for (int l = 0; l < L; ++l) {
    const double var_l = (x_sqsum[l] - x_sum[l] * x_sum[l] / t) / (t - 1.0);
    const double ang = 2.0 * detail::kPi * l * idx / L;
    rhs += var_l * std::complex<double>(std::cos(ang), std::sin(ang));
  }
  rep.rhs = std::abs(rhs * inv_sqrt_l);
  rep.distinct = std::abs(rep.lhs - rep.rhs) > tolerance;
  return rep;
}

}  // namespace fcs

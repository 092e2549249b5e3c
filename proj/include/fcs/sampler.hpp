#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fcs/grid.hpp"
#include "fcs/mask.hpp"
#include "fcs/maskgen.hpp"
#include "fcs/rng.hpp"
#include "fcs/transforms.hpp"

namespace fcs {

enum class SamplerVariant { gaussian_spectral, jitter_ensemble };

struct SamplerSpec {
  SamplerVariant variant = SamplerVariant::gaussian_spectral;
  double alpha = 1.0;        // spectral decay exponent
  double amplitude = 1.0;    // prior power scale
  double temperature = 1.0;  // scales sample spread; 0 collapses to the mean
  uint64_t seed = 0;

  void validate() const {
    if (alpha <= 0.0) throw std::invalid_argument("SamplerSpec: alpha must be > 0");
    if (amplitude <= 0.0) throw std::invalid_argument("SamplerSpec: amplitude must be > 0");
    if (temperature < 0.0) throw std::invalid_argument("SamplerSpec: temperature must be >= 0");
  }
};

struct SampleEnsemble {
  std::vector<ImageGrid> samples;
  SamplingMask source_mask;
  SamplerSpec sampler;
};

namespace detail {

// Acquired set closed under conjugation. A real image pins coeff(-f) to
// conj(coeff(f)), so a location whose partner is acquired carries no
// posterior freedom.
inline std::vector<uint8_t> conj_closure(const SamplingMask& m0) {
  const int h = m0.height, w = m0.width;
  auto cells = m0.cell_lookup();
  std::vector<uint8_t> closed(cells.begin(), cells.end());
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      if (cells[static_cast<size_t>(r) * w + c])
        closed[static_cast<size_t>(conj_partner(r, h)) * w + conj_partner(c, w)] = 1;
  return closed;
}

// One conjugate-symmetric draw: acquired coefficients verbatim, partners of
// acquired pinned to the conjugate, the rest Gaussian with the given
// per-location variance.
inline ImageGrid draw_symmetric_sample(const KGrid& lf_k, const std::vector<uint8_t>& cells,
                                       const RealGrid& variance, uint64_t seed) {
  const int h = lf_k.height, w = lf_k.width;
  KGrid k(h, w);
  k.from_real_image = true;
  Rng rng(seed);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const size_t idx = static_cast<size_t>(r) * w + c;
      const int pr = conj_partner(r, h), pc = conj_partner(c, w);
      const size_t pidx = static_cast<size_t>(pr) * w + pc;
      if (cells[idx]) {
        k.coeffs[idx] = lf_k.coeffs[idx];
        continue;
      }
      if (cells[pidx]) {
        k.coeffs[idx] = std::conj(lf_k.coeffs[pidx]);
        continue;
      }
      if (idx == pidx) {
        k.coeffs[idx] = rng.normal() * std::sqrt(variance.values[idx]);
      } else if (idx < pidx) {
        const double s = std::sqrt(variance.values[idx] / 2.0);
        const std::complex<double> g(rng.normal() * s, rng.normal() * s);
        k.coeffs[idx] = g;
        k.coeffs[pidx] = std::conj(g);
      }
    }
  }
  return idft2_unitary(k);
}

inline SampleEnsemble draw_ensemble(const KGrid& lf_k, const SamplingMask& m0,
                                    const SamplerSpec& spec, int count,
                                    const RealGrid& variance) {
  if (count < 1) throw std::invalid_argument("sampler: count must be >= 1");
  require_same_shape(m0, lf_k.height, lf_k.width, "sampler");
  const auto cells = m0.cell_lookup();
  SampleEnsemble ens;
  ens.source_mask = m0;
  ens.sampler = spec;
  ens.samples.reserve(count);
  for (int s = 0; s < count; ++s)
    ens.samples.push_back(
        draw_symmetric_sample(lf_k, cells, variance, mix_seed(spec.seed, static_cast<uint64_t>(s))));
  return ens;
}

}  // namespace detail

/// Closed-form posterior variance of the gaussian_spectral model:
/// temperature^2 * amplitude / (1 + |f|)^(2 alpha) at free locations, zero on
/// the conjugate closure of the acquired set.
inline UncertaintyMap analytic_posterior_variance(const SamplingMask& m0, const SamplerSpec& spec) {
  if (spec.variant != SamplerVariant::gaussian_spectral)
    throw std::invalid_argument("analytic_posterior_variance: no closed form for this variant");
  spec.validate();
  const int h = m0.height, w = m0.width;
  const auto closed = detail::conj_closure(m0);
  UncertaintyMap v(h, w);
  const double scale = spec.temperature * spec.temperature * spec.amplitude;
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      const size_t idx = static_cast<size_t>(r) * w + c;
      if (closed[idx]) continue;
      v.values[idx] = scale / std::pow(1.0 + radial_freq(r, c, h, w), 2.0 * spec.alpha);
    }
  return v;
}

/// Posterior draws from an isotropic power-law spectral prior conditioned on
/// the acquired low-frequency data. Samples are exactly real and exactly
/// data-consistent on M0.
inline SampleEnsemble gaussian_spectral_sample(const KGrid& lf_k, const SamplingMask& m0,
                                               const SamplerSpec& spec, int count) {
  if (spec.variant != SamplerVariant::gaussian_spectral)
    throw std::invalid_argument("gaussian_spectral_sample: wrong variant");
  return detail::draw_ensemble(lf_k, m0, spec, count, analytic_posterior_variance(m0, spec));
}

/// Image-adaptive heuristic variance: each acquired LF coefficient spreads
/// its energy radially outward along its own direction, so stripe-like
/// content yields axis-concentrated uncertainty. No closed form.
inline UncertaintyMap jitter_variance(const KGrid& lf_k, const SamplingMask& m0,
                                      const SamplerSpec& spec) {
  spec.validate();
  const int h = lf_k.height, w = lf_k.width;
  require_same_shape(m0, h, w, "jitter_variance");
  const auto cells = m0.cell_lookup();
  const auto closed = detail::conj_closure(m0);

  constexpr double kAngleSigma = 0.18;  // radians
  constexpr double kIsoWeight = 0.01;

  // Directional energy sources from the conditioning data.
  struct Source {
    double angle;  // folded to [0, pi)
    double energy;
  };
  std::vector<Source> sources;
  double iso_energy = 0.0;
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      const size_t idx = static_cast<size_t>(r) * w + c;
      if (!cells[idx]) continue;
      const double e = std::norm(lf_k.coeffs[idx]);
      const double gy = freq_offset(r, h), gx = freq_offset(c, w);
      if (std::hypot(gy, gx) < 1.5) {
        iso_energy += e;  // DC-adjacent: no usable direction
      } else {
        double a = std::atan2(gy, gx);
        if (a < 0) a += detail::kPi;
        if (a >= detail::kPi) a -= detail::kPi;
        sources.push_back({a, e});
      }
    }

  UncertaintyMap v(h, w);
  double total = 0.0;
  int free_count = 0;
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      const size_t idx = static_cast<size_t>(r) * w + c;
      if (closed[idx]) continue;
      const double fy = freq_offset(r, h), fx = freq_offset(c, w);
      double a = std::atan2(fy, fx);
      if (a < 0) a += detail::kPi;
      if (a >= detail::kPi) a -= detail::kPi;
      double acc = kIsoWeight * iso_energy;
      for (const auto& src : sources) {
        double da = std::abs(a - src.angle);
        da = std::min(da, detail::kPi - da);  // angle modulo pi
        acc += src.energy * std::exp(-da * da / (2.0 * kAngleSigma * kAngleSigma));
      }
      const double decay =
          1.0 / std::pow(1.0 + radial_freq(r, c, h, w), 2.0 * spec.alpha);
      v.values[idx] = acc * decay;
      total += v.values[idx];
      ++free_count;
    }
  if (free_count > 0 && total > 0.0) {
    const double scale =
        spec.temperature * spec.temperature * spec.amplitude * free_count / total;
    for (auto& x : v.values) x *= scale;
  }
  return v;
}

inline SampleEnsemble jitter_ensemble_sample(const KGrid& lf_k, const SamplingMask& m0,
                                             const SamplerSpec& spec, int count) {
  if (spec.variant != SamplerVariant::jitter_ensemble)
    throw std::invalid_argument("jitter_ensemble_sample: wrong variant");
  return detail::draw_ensemble(lf_k, m0, spec, count, jitter_variance(lf_k, m0, spec));
}

/// Dispatch on spec.variant.
inline SampleEnsemble draw_samples(const KGrid& lf_k, const SamplingMask& m0,
                                   const SamplerSpec& spec, int count) {
  return spec.variant == SamplerVariant::gaussian_spectral
             ? gaussian_spectral_sample(lf_k, m0, spec, count)
             : jitter_ensemble_sample(lf_k, m0, spec, count);
}

}  // namespace fcs

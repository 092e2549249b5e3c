#include <catch2/catch_amalgamated.hpp>

#include "fcs/phantom.hpp"
#include "fcs/sampler.hpp"
#include "fcs/uncertainty.hpp"
#include "test_util.hpp"

using namespace fcs;

namespace {

// Odd extent keeps the LF block closed under conjugation, so zero temperature
// collapses the posterior exactly onto the zero-fill reconstruction.
SamplingMask odd_m0(int h, int w) { return lowfreq_mask(h, w, MaskKind::point2d, 5); }

}  // namespace

TEST_CASE("temperature zero collapses every sample onto zero-fill") {
  const int h = 16, w = 16;
  const SamplingMask m0 = odd_m0(h, w);
  const KGrid lf = apply_mask(dft2_unitary(testutil::random_image(h, w, 3)), m0);
  SamplerSpec spec;
  spec.temperature = 0.0;
  spec.seed = 99;
  const ImageGrid zf = zero_fill_recon(lf, m0);
  const SampleEnsemble ens = gaussian_spectral_sample(lf, m0, spec, 5);
  REQUIRE(ens.samples.size() == 5);
  for (const auto& s : ens.samples)
    for (size_t i = 0; i < s.size(); ++i)
      CHECK(std::abs(s.pixels[i] - zf.pixels[i]) < 1e-12);
}

TEST_CASE("samples are exactly data-consistent on the acquired set") {
  const int h = 16, w = 16;
  const SamplingMask m0 = odd_m0(h, w);
  const KGrid lf = apply_mask(dft2_unitary(testutil::random_image(h, w, 4)), m0);
  SamplerSpec spec;
  spec.seed = 5;
  for (auto variant : {SamplerVariant::gaussian_spectral, SamplerVariant::jitter_ensemble}) {
    spec.variant = variant;
    const SampleEnsemble ens = draw_samples(lf, m0, spec, 4);
    const auto cells = m0.cell_lookup();
    for (const auto& s : ens.samples) {
      const KGrid k = dft2_unitary(s);
      for (size_t i = 0; i < k.size(); ++i)
        if (cells[i]) CHECK(std::abs(k.coeffs[i] - lf.coeffs[i]) < 1e-10);
    }
  }
}

TEST_CASE("samples are exactly real-valued in k-space symmetry terms") {
  const int h = 12, w = 12;
  const SamplingMask m0 = lowfreq_mask(h, w, MaskKind::point2d, 3);
  const KGrid lf = apply_mask(dft2_unitary(testutil::random_image(h, w, 8)), m0);
  SamplerSpec spec;
  spec.seed = 17;
  const auto cells = m0.cell_lookup();
  const ImageGrid s = detail::draw_symmetric_sample(
      lf, std::vector<uint8_t>(cells.begin(), cells.end()),
      analytic_posterior_variance(m0, spec), 21);
  const KGrid k = dft2_unitary(s);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      CHECK(std::abs(k.at(r, c) - std::conj(k.at(conj_partner(r, h), conj_partner(c, w)))) <
            1e-10);
}

TEST_CASE("analytic variance: full mask zero, DC-only corner formula") {
  SamplerSpec spec;
  spec.alpha = 1.0;
  spec.amplitude = 2.0;
  spec.temperature = 0.5;

  const int h = 8, w = 8;
  std::vector<int> all(h * w);
  for (int i = 0; i < h * w; ++i) all[i] = i;
  const SamplingMask full = make_mask(h, w, MaskKind::point2d, std::move(all));
  const UncertaintyMap vz = analytic_posterior_variance(full, spec);
  for (double x : vz.values) CHECK(x == 0.0);

  const SamplingMask dc = make_mask(h, w, MaskKind::point2d, {h / 2 * w + w / 2});
  const UncertaintyMap v = analytic_posterior_variance(dc, spec);
  const double fmax = radial_freq(0, 0, h, w);  // sqrt(2) at the corner
  const double expected = 0.25 * 2.0 / ((1.0 + fmax) * (1.0 + fmax));
  CHECK(std::abs(v.at(0, 0) - expected) < 1e-12);
  CHECK(v.at(h / 2, w / 2) == 0.0);

  SamplerSpec jitter = spec;
  jitter.variant = SamplerVariant::jitter_ensemble;
  CHECK_THROWS_AS(analytic_posterior_variance(dc, jitter), std::invalid_argument);
}

TEST_CASE("sample variance converges to the analytic variance") {
  const int h = 16, w = 16, S = 4096;
  const SamplingMask m0 = odd_m0(h, w);
  const KGrid lf = apply_mask(dft2_unitary(testutil::random_image(h, w, 12)), m0);
  SamplerSpec spec;
  spec.alpha = 1.0;
  spec.temperature = 1.0;
  spec.seed = 31;
  const UncertaintyMap v = kspace_sample_variance(gaussian_spectral_sample(lf, m0, spec, S));
  const UncertaintyMap oracle = analytic_posterior_variance(m0, spec);
  const auto closed = detail::conj_closure(m0);
  double worst = 0.0;
  for (size_t i = 0; i < v.values.size(); ++i) {
    if (closed[i]) {
      CHECK(v.values[i] < 1e-20);
      continue;
    }
    worst = std::max(worst, std::abs(v.values[i] - oracle.values[i]) / oracle.values[i]);
  }
  CHECK(worst < 0.05);
}

TEST_CASE("sampled variance ordering matches the analytic ordering") {
  const int h = 16, w = 16, S = 4096;
  const SamplingMask m0 = odd_m0(h, w);
  const KGrid lf = apply_mask(dft2_unitary(testutil::random_image(h, w, 13)), m0);
  SamplerSpec spec;
  spec.seed = 77;
  const UncertaintyMap v = kspace_sample_variance(gaussian_spectral_sample(lf, m0, spec, S));
  const UncertaintyMap oracle = analytic_posterior_variance(m0, spec);
  const auto closed = detail::conj_closure(m0);
  std::vector<double> sampled, exact;
  for (size_t i = 0; i < v.values.size(); ++i)
    if (!closed[i]) {
      sampled.push_back(v.values[i]);
      exact.push_back(oracle.values[i]);
    }
  CHECK(testutil::kendall_tau(sampled, exact) > 0.95);
}

TEST_CASE("jitter variance is anisotropic for stripes") {
  const int h = 32, w = 32;
  const SamplingMask m0 = lowfreq_mask(h, w, MaskKind::point2d, 7);
  SamplerSpec spec;
  spec.variant = SamplerVariant::jitter_ensemble;

  // Horizontal stripes vary along rows: energy on the fy axis.
  const ImageGrid stripes = make_phantom(PhantomKind::stripes_h, h, w, 2024);
  const KGrid lf = apply_mask(dft2_unitary(stripes), m0);
  const UncertaintyMap v = jitter_variance(lf, m0, spec);
  const double on_axis = testutil::band_energy_map(v, 0, 2, 4.0);
  const double off_axis = testutil::band_energy_map(v, 1, 2, 4.0);
  CHECK(on_axis > 2.0 * off_axis);

  // and the transpose orientation flips the ratio
  const ImageGrid stripes_v = make_phantom(PhantomKind::stripes_v, h, w, 2024);
  const UncertaintyMap vv = jitter_variance(apply_mask(dft2_unitary(stripes_v), m0), m0, spec);
  CHECK(testutil::band_energy_map(vv, 1, 2, 4.0) > 2.0 * testutil::band_energy_map(vv, 0, 2, 4.0));
}

TEST_CASE("sampler argument validation") {
  SamplerSpec bad;
  bad.alpha = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = SamplerSpec{};
  bad.temperature = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  const SamplingMask m0 = lowfreq_mask(8, 8, MaskKind::point2d, 3);
  const KGrid lf = apply_mask(dft2_unitary(testutil::random_image(8, 8, 1)), m0);
  SamplerSpec spec;
  CHECK_THROWS_AS(gaussian_spectral_sample(lf, m0, spec, 0), std::invalid_argument);
  spec.variant = SamplerVariant::jitter_ensemble;
  CHECK_THROWS_AS(gaussian_spectral_sample(lf, m0, spec, 4), std::invalid_argument);
}

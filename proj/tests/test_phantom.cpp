#include <catch2/catch_amalgamated.hpp>

#include "fcs/phantom.hpp"
#include "fcs/transforms.hpp"
#include "fcs/wavelet.hpp"
#include "test_util.hpp"

using namespace fcs;

TEST_CASE("phantoms are deterministic, in range, and seed-sensitive") {
  for (auto kind : {PhantomKind::stripes_h, PhantomKind::stripes_v, PhantomKind::haar_sparse,
                    PhantomKind::smooth_blobs}) {
    const ImageGrid a = make_phantom(kind, 32, 32, 5);
    const ImageGrid b = make_phantom(kind, 32, 32, 5);
    const ImageGrid c = make_phantom(kind, 32, 32, 6);
    CHECK(a.pixels == b.pixels);
    CHECK(a.pixels != c.pixels);
    for (double p : a.pixels) {
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
    }
  }
  CHECK_THROWS_AS(make_phantom(PhantomKind::stripes_h, 0, 4, 1), std::invalid_argument);
}

TEST_CASE("stripe phantoms concentrate spectral energy on the matching axis") {
  int h_ok = 0, v_ok = 0;
  const int trials = 10;
  for (int t = 0; t < trials; ++t) {
    const KGrid kh = dft2_unitary(make_phantom(PhantomKind::stripes_h, 64, 64, 100 + t));
    const KGrid kv = dft2_unitary(make_phantom(PhantomKind::stripes_v, 64, 64, 100 + t));
    if (testutil::axis_band_energy(kh, 0, 1, 2.5) >
        2.0 * testutil::axis_band_energy(kh, 1, 1, 2.5))
      ++h_ok;
    if (testutil::axis_band_energy(kv, 1, 1, 2.5) >
        2.0 * testutil::axis_band_energy(kv, 0, 1, 2.5))
      ++v_ok;
  }
  CHECK(h_ok == trials);
  CHECK(v_ok == trials);
}

TEST_CASE("haar_sparse phantoms are sparse in the wavelet domain") {
  const int h = 64, w = 64;
  const ImageGrid img = make_phantom(PhantomKind::haar_sparse, h, w, 9);
  std::vector<double> coeffs = img.pixels;
  haar_forward(coeffs, h, w, 3);
  // normalization adds a constant, which a 3-level transform spreads over the
  // 8x8 scaling block; beyond those 64 entries only the planted spikes remain
  std::vector<double> mags;
  for (double c : coeffs) mags.push_back(std::abs(c));
  std::sort(mags.rbegin(), mags.rend());
  double head = 0.0, total = 0.0;
  int nonzero = 0;
  for (size_t i = 0; i < mags.size(); ++i) {
    total += mags[i] * mags[i];
    if (i < 96) head = total;
    nonzero += mags[i] > 1e-9;
  }
  CHECK(head / total > 0.999);
  CHECK(nonzero <= 96);
}

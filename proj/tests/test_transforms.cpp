#include <catch2/catch_amalgamated.hpp>

#include "fcs/transforms.hpp"
#include "test_util.hpp"

using namespace fcs;

TEST_CASE("dft2_unitary matches the direct-summation oracle") {
  for (auto [h, w] : {std::pair{8, 8}, {6, 10}, {15, 17}, {1, 9}, {16, 12}}) {
    const ImageGrid img = testutil::random_image(h, w, 1000 + h * 100 + w);
    const KGrid fast = dft2_unitary(img);
    const KGrid slow = testutil::naive_dft2(img);
    double max_err = 0.0;
    for (size_t i = 0; i < fast.size(); ++i)
      max_err = std::max(max_err, std::abs(fast.coeffs[i] - slow.coeffs[i]));
    INFO("shape " << h << "x" << w);
    CHECK(max_err < 1e-10);
  }
}

TEST_CASE("constant image concentrates at the centered DC cell") {
  const int h = 8, w = 12;
  const ImageGrid img(h, w, 0.5);
  const KGrid k = dft2_unitary(img);
  const double dc_expected = 0.5 * std::sqrt(static_cast<double>(h) * w);
  CHECK(std::abs(k.at(h / 2, w / 2) - dc_expected) < 1e-12);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      if (r != h / 2 || c != w / 2) CHECK(std::abs(k.at(r, c)) < 1e-12);
}

TEST_CASE("Parseval equality and exact round-trip") {
  for (auto [h, w] : {std::pair{64, 64}, {48, 32}, {15, 17}}) {
    const ImageGrid img = testutil::random_image(h, w, 2000 + h + w);
    const KGrid k = dft2_unitary(img);
    const double ei = l2_norm_sq(img.pixels);
    const double ek = l2_norm_sq(k.coeffs);
    CHECK(std::abs(ei - ek) / ei < 1e-12);

    double imag = 1.0;
    const ImageGrid back = idft2_unitary(k, &imag);
    CHECK(imag < 1e-12);
    for (size_t i = 0; i < img.size(); ++i)
      CHECK(std::abs(back.pixels[i] - img.pixels[i]) < 1e-12);
  }
}

TEST_CASE("real images have conjugate-symmetric spectra") {
  const int h = 10, w = 14;
  const KGrid k = dft2_unitary(testutil::random_image(h, w, 77));
  REQUIRE(k.from_real_image);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      const auto partner = k.at(conj_partner(r, h), conj_partner(c, w));
      CHECK(std::abs(k.at(r, c) - std::conj(partner)) < 1e-12);
    }
}

TEST_CASE("apply_mask zeroes exactly the unacquired cells") {
  const int h = 6, w = 6;
  const KGrid k = dft2_unitary(testutil::random_image(h, w, 5));
  const SamplingMask m = make_mask(h, w, MaskKind::point2d, {0, 7, 14, 21, 35});
  const KGrid masked = apply_mask(k, m);
  const auto cells = m.cell_lookup();
  for (size_t i = 0; i < masked.size(); ++i) {
    if (cells[i])
      CHECK(masked.coeffs[i] == k.coeffs[i]);
    else
      CHECK(masked.coeffs[i] == std::complex<double>(0.0));
  }
}

TEST_CASE("zero_fill_recon rejects data inconsistent with the mask") {
  const int h = 4, w = 4;
  const KGrid k = dft2_unitary(testutil::random_image(h, w, 6));
  const SamplingMask m = make_mask(h, w, MaskKind::point2d, {1, 2, 3});
  CHECK_THROWS_AS(zero_fill_recon(k, m), std::invalid_argument);
  CHECK_NOTHROW(zero_fill_recon(apply_mask(k, m), m));
}

TEST_CASE("zero-fill MSE equals the unacquired spectral energy over L") {
  // The identity requires a conjugate-symmetric mask: zero-fill keeps the
  // real part, which only preserves energy when the acquired set is closed
  // under frequency negation.
  fcs::Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const int h = 8, w = 12;
    const ImageGrid img = testutil::random_image(h, w, 4242 + trial);
    const KGrid k = dft2_unitary(img);

    std::vector<int> acq;
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c)
        if (rng.uniform() < 0.5) {
          acq.push_back(r * w + c);
          acq.push_back(conj_partner(r, h) * w + conj_partner(c, w));
        }
    if (acq.empty()) acq.push_back(h / 2 * w + w / 2);
    const SamplingMask m = make_mask(h, w, MaskKind::point2d, std::move(acq));

    const ImageGrid rec = zero_fill_recon(apply_mask(k, m), m);
    double mse = 0.0;
    for (size_t i = 0; i < img.size(); ++i) {
      const double d = img.pixels[i] - rec.pixels[i];
      mse += d * d;
    }
    mse /= static_cast<double>(h * w);

    const auto cells = m.cell_lookup();
    double unacq = 0.0;
    for (size_t i = 0; i < k.size(); ++i)
      if (!cells[i]) unacq += std::norm(k.coeffs[i]);
    unacq /= static_cast<double>(h * w);

    CHECK(std::abs(mse - unacq) < 1e-12);
  }
}

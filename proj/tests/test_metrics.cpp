#include <catch2/catch_amalgamated.hpp>

#include "fcs/metrics.hpp"
#include "test_util.hpp"

using namespace fcs;

TEST_CASE("psnr of identical images is infinite, known MSE gives known value") {
  const ImageGrid img = testutil::random_image(8, 8, 1);
  CHECK(std::isinf(psnr(img, img)));

  ImageGrid ref(8, 8, 1.0);
  ImageGrid off(8, 8, 0.9);  // MSE = 0.01, MAX = 1 -> 20 dB
  CHECK(std::abs(psnr(ref, off) - 20.0) < 1e-10);

  CHECK_THROWS_AS(psnr(ImageGrid(8, 8, 0.0), off), std::invalid_argument);
  CHECK_THROWS_AS(psnr(ref, ImageGrid(4, 8, 0.5)), std::invalid_argument);
}

TEST_CASE("ssim of an image with itself is one") {
  const ImageGrid img = testutil::random_image(16, 16, 2);
  CHECK(std::abs(ssim(img, img) - 1.0) < 1e-12);
  CHECK(std::abs(ssim_loss(img, img)) < 1e-12);
}

TEST_CASE("ssim matches the direct-summation oracle") {
  for (int t = 0; t < 20; ++t) {
    const int h = 7 + t % 3 * 5, w = 7 + t % 4 * 4;
    const ImageGrid a = testutil::random_image(h, w, 100 + t);
    ImageGrid b = testutil::random_image(h, w, 200 + t);
    // mix to get realistically correlated pairs
    for (size_t i = 0; i < b.size(); ++i) b.pixels[i] = 0.7 * a.pixels[i] + 0.3 * b.pixels[i];
    CHECK(std::abs(ssim(a, b) - testutil::naive_ssim(a, b)) < 1e-8);
  }
}

TEST_CASE("ssim decreases with added noise") {
  const ImageGrid a = testutil::random_image(32, 32, 5);
  ImageGrid mild = a, heavy = a;
  Rng rng(9);
  for (size_t i = 0; i < a.size(); ++i) {
    const double n = rng.normal();
    mild.pixels[i] += 0.01 * n;
    heavy.pixels[i] += 0.1 * n;
  }
  CHECK(ssim(a, mild) > ssim(a, heavy));
}

TEST_CASE("ssim rejects images smaller than the window") {
  const ImageGrid tiny = testutil::random_image(6, 10, 1);
  CHECK_THROWS_AS(ssim(tiny, tiny), std::invalid_argument);
}

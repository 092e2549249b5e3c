#include <catch2/catch_amalgamated.hpp>

#include "fcs/wavelet.hpp"
#include "test_util.hpp"

using namespace fcs;

TEST_CASE("haar transform is orthonormal and invertible") {
  const int h = 16, w = 32, levels = 3;
  const ImageGrid img = testutil::random_image(h, w, 10);
  std::vector<double> coeffs = img.pixels;
  haar_forward(coeffs, h, w, levels);
  CHECK(std::abs(l2_norm_sq(coeffs) - l2_norm_sq(img.pixels)) < 1e-10);
  haar_inverse(coeffs, h, w, levels);
  for (size_t i = 0; i < coeffs.size(); ++i)
    CHECK(std::abs(coeffs[i] - img.pixels[i]) < 1e-12);
}

TEST_CASE("constant image collapses to a single scaling coefficient") {
  const int h = 8, w = 8, levels = 3;
  std::vector<double> data(64, 1.0);
  haar_forward(data, h, w, levels);
  CHECK(std::abs(data[0] - 8.0) < 1e-12);  // sqrt(64) * 1
  for (size_t i = 1; i < data.size(); ++i) CHECK(std::abs(data[i]) < 1e-12);
}

TEST_CASE("shape checks on non-dyadic sizes") {
  CHECK_THROWS_AS(check_haar_shape(12, 16, 3), std::invalid_argument);
  CHECK_THROWS_AS(check_haar_shape(16, 16, 0), std::invalid_argument);
  CHECK_NOTHROW(check_haar_shape(24, 16, 3));
}

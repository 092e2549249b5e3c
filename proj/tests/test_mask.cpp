#include <catch2/catch_amalgamated.hpp>

#include "fcs/mask.hpp"

using namespace fcs;

TEST_CASE("make_mask sorts, deduplicates, and bounds-checks") {
  const SamplingMask m = make_mask(4, 4, MaskKind::point2d, {9, 2, 2, 0});
  CHECK(m.acquired == std::vector<int>{0, 2, 9});
  CHECK(m.budget() == 3);
  CHECK_THROWS_AS(make_mask(4, 4, MaskKind::point2d, {16}), std::invalid_argument);
  CHECK_THROWS_AS(make_mask(4, 4, MaskKind::point2d, {-1}), std::invalid_argument);
  CHECK_THROWS_AS(make_mask(4, 4, MaskKind::line1d, {4}), std::invalid_argument);
  CHECK_THROWS_AS(make_mask(0, 4, MaskKind::point2d, {}), std::invalid_argument);
}

TEST_CASE("line masks count a full column per line") {
  const SamplingMask m = make_mask(6, 8, MaskKind::line1d, {1, 4});
  CHECK(m.budget() == 12);
  CHECK(m.num_cells() == 48);
  CHECK(m.acceleration() == 4.0);
  const auto cells = m.cell_lookup();
  int on = 0;
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 8; ++c)
      if (cells[r * 8 + c]) {
        ++on;
        CHECK((c == 1 || c == 4));
      }
  CHECK(on == 12);
}

TEST_CASE("containment is cellwise across kinds") {
  const SamplingMask lines = make_mask(4, 4, MaskKind::line1d, {2});
  const SamplingMask points = make_mask(4, 4, MaskKind::point2d, {2, 6, 10, 14});
  const SamplingMask partial = make_mask(4, 4, MaskKind::point2d, {2, 6});
  CHECK(lines.contains(points));
  CHECK(points.contains(lines));
  CHECK(lines.contains(partial));
  CHECK_FALSE(partial.contains(lines));
}

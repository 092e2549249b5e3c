#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "fcs/grid.hpp"

namespace fcs {

enum class MaskKind { point2d, line1d };

/// Set of acquired k-space locations over a centered H x W grid.
/// For point2d, `acquired` holds row-major cell indices; for line1d it
/// holds column indices (a line acquires every row of the column).
struct SamplingMask {
  int height = 0;
  int width = 0;
  MaskKind kind = MaskKind::point2d;
  std::vector<int> acquired;  // sorted, duplicate-free

  int budget() const {
    return kind == MaskKind::point2d ? static_cast<int>(acquired.size())
                                     : static_cast<int>(acquired.size()) * height;
  }

  int num_cells() const { return height * width; }

  double acceleration() const { return static_cast<double>(num_cells()) / budget(); }

  /// Row-major 0/1 cell lookup. O(L); build once outside hot loops.
  std::vector<uint8_t> cell_lookup() const {
    std::vector<uint8_t> cells(static_cast<size_t>(height) * width, 0);
    if (kind == MaskKind::point2d) {
      for (int idx : acquired) cells[idx] = 1;
    } else {
      for (int col : acquired)
        for (int r = 0; r < height; ++r) cells[static_cast<size_t>(r) * width + col] = 1;
    }
    return cells;
  }

  bool contains(const SamplingMask& other) const {
    if (height != other.height || width != other.width) return false;
    const auto mine = cell_lookup();
    const auto theirs = other.cell_lookup();
    for (size_t i = 0; i < mine.size(); ++i)
      if (theirs[i] && !mine[i]) return false;
    return true;
  }
};

inline SamplingMask make_mask(int height, int width, MaskKind kind, std::vector<int> acquired) {
  if (height < 1 || width < 1) throw std::invalid_argument("make_mask: nonpositive shape");
  std::sort(acquired.begin(), acquired.end());
  acquired.erase(std::unique(acquired.begin(), acquired.end()), acquired.end());
  const int limit = kind == MaskKind::point2d ? height * width : width;
  for (int idx : acquired)
    if (idx < 0 || idx >= limit) throw std::invalid_argument("make_mask: index out of bounds");
  return SamplingMask{height, width, kind, std::move(acquired)};
}

inline void require_same_shape(const SamplingMask& m, int height, int width, const char* who) {
  if (m.height != height || m.width != width)
    throw std::invalid_argument(std::string(who) + ": mask shape mismatch");
}

}  // namespace fcs

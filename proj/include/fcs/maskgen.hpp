#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "fcs/grid.hpp"
#include "fcs/mask.hpp"
#include "fcs/rng.hpp"

namespace fcs {

/// Centered low-frequency block: lf_extent x lf_extent cells for point2d,
/// lf_extent center columns (ACS lines) for line1d.
inline SamplingMask lowfreq_mask(int height, int width, MaskKind kind, int lf_extent) {
  if (lf_extent < 0) throw std::invalid_argument("lowfreq_mask: negative extent");
  std::vector<int> acquired;
  if (kind == MaskKind::point2d) {
    if (lf_extent > std::min(height, width))
      throw std::invalid_argument("lowfreq_mask: extent exceeds grid");
    const int r0 = height / 2 - lf_extent / 2;
    const int c0 = width / 2 - lf_extent / 2;
    for (int r = r0; r < r0 + lf_extent; ++r)
      for (int c = c0; c < c0 + lf_extent; ++c) acquired.push_back(r * width + c);
  } else {
    if (lf_extent > width) throw std::invalid_argument("lowfreq_mask: extent exceeds width");
    const int c0 = width / 2 - lf_extent / 2;
    for (int c = c0; c < c0 + lf_extent; ++c) acquired.push_back(c);
  }
  return make_mask(height, width, kind, std::move(acquired));
}

namespace detail {

// Candidate units outside m0: cell indices for point2d, columns for line1d.
inline std::vector<int> free_units(const SamplingMask& m0) {
  std::vector<int> units;
  if (m0.kind == MaskKind::point2d) {
    const auto cells = m0.cell_lookup();
    for (int i = 0; i < m0.num_cells(); ++i)
      if (!cells[i]) units.push_back(i);
  } else {
    std::vector<uint8_t> used(m0.width, 0);
    for (int c : m0.acquired) used[c] = 1;
    for (int c = 0; c < m0.width; ++c)
      if (!used[c]) units.push_back(c);
  }
  return units;
}

// Per-unit weight from a per-cell map; lines take their column sum.
inline double unit_weight(const RealGrid& v, MaskKind kind, int unit) {
  if (kind == MaskKind::point2d) return v.values[unit];
  double s = 0.0;
  for (int r = 0; r < v.height; ++r) s += v.at(r, unit);
  return s;
}

inline int units_needed(const SamplingMask& m0, int total_budget, const char* who) {
  if (total_budget < m0.budget())
    throw std::invalid_argument(std::string(who) + ": budget below m0");
  if (total_budget > m0.num_cells())
    throw std::invalid_argument(std::string(who) + ": budget exceeds grid");
  const int extra = total_budget - m0.budget();
  if (m0.kind == MaskKind::line1d) {
    if (extra % m0.height != 0)
      throw std::invalid_argument(std::string(who) + ": line budget not a multiple of height");
    return extra / m0.height;
  }
  return extra;
}

inline SamplingMask with_units(const SamplingMask& m0, std::vector<int> units) {
  std::vector<int> acquired = m0.acquired;
  acquired.insert(acquired.end(), units.begin(), units.end());
  return make_mask(m0.height, m0.width, m0.kind, std::move(acquired));
}

}  // namespace detail

/// M0 plus the highest-weight locations outside M0, ties broken by
/// ascending row-major index. Realizes descending-variance selection.
inline SamplingMask sorted_mask(const RealGrid& v, const SamplingMask& m0, int total_budget) {
  require_same_shape(m0, v.height, v.width, "sorted_mask");
  const int need = detail::units_needed(m0, total_budget, "sorted_mask");
  auto units = detail::free_units(m0);
  std::stable_sort(units.begin(), units.end(), [&](int a, int b) {
    return detail::unit_weight(v, m0.kind, a) > detail::unit_weight(v, m0.kind, b);
  });
  units.resize(need);
  return detail::with_units(m0, std::move(units));
}

/// Weighted selection without replacement outside M0, inclusion proportional
/// to weight. Exponential-keys reservoir rule: keep the n largest u^(1/w).
inline SamplingMask rejection_sample_mask(const RealGrid& weights, const SamplingMask& m0,
                                          int total_budget, uint64_t seed) {
  require_same_shape(m0, weights.height, weights.width, "rejection_sample_mask");
  const int need = detail::units_needed(m0, total_budget, "rejection_sample_mask");
  const auto units = detail::free_units(m0);

  Rng rng(mix_seed(seed, 0x7265'6a65'6374ULL));
  std::vector<std::pair<double, int>> keyed;  // (log(u)/w, unit)
  keyed.reserve(units.size());
  for (int unit : units) {
    const double w = detail::unit_weight(weights, m0.kind, unit);
    const double u = rng.uniform_pos();  // one draw per unit, fixed order
    if (w > 0.0) keyed.emplace_back(std::log(u) / w, unit);
  }
  if (static_cast<int>(keyed.size()) < need)
    throw std::invalid_argument("rejection_sample_mask: insufficient positive-weight support");
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<int> chosen;
  chosen.reserve(need);
  for (int i = 0; i < need; ++i) chosen.push_back(keyed[i].second);
  return detail::with_units(m0, std::move(chosen));
}

/// Variable-density weights (1 - d)^a_f with d the center-normalized radius.
inline RealGrid vd_weights(int height, int width, MaskKind kind, double a_f) {
  RealGrid w(height, width);
  if (kind == MaskKind::point2d) {
    const double corner = radial_freq(0, 0, height, width);
    for (int r = 0; r < height; ++r)
      for (int c = 0; c < width; ++c) {
        const double d = std::min(1.0, radial_freq(r, c, height, width) / corner);
        w.at(r, c) = std::pow(1.0 - d, a_f);
      }
  } else {
    const double half = std::max(1, width / 2);
    for (int c = 0; c < width; ++c) {
      const double d = std::min(1.0, std::abs(freq_offset(c, width)) / half);
      for (int r = 0; r < height; ++r) w.at(r, c) = std::pow(1.0 - d, a_f);
    }
  }
  return w;
}

inline SamplingMask vd_mask(int height, int width, MaskKind kind, const SamplingMask& m0,
                            int total_budget, double a_f, uint64_t seed) {
  require_same_shape(m0, height, width, "vd_mask");
  return rejection_sample_mask(vd_weights(height, width, kind, a_f), m0, total_budget, seed);
}

inline SamplingMask random_mask(int height, int width, MaskKind kind, const SamplingMask& m0,
                                int total_budget, uint64_t seed) {
  require_same_shape(m0, height, width, "random_mask");
  return rejection_sample_mask(RealGrid(height, width, 1.0), m0, total_budget, seed);
}

/// ACS lines plus equispaced lines over the remaining columns;
/// stride = floor(available / needed), phase 0.
inline SamplingMask equispaced_mask(int height, int width, const SamplingMask& m0,
                                    int total_budget) {
  if (m0.kind != MaskKind::line1d)
    throw std::invalid_argument("equispaced_mask: line1d masks only");
  require_same_shape(m0, height, width, "equispaced_mask");
  const int need = detail::units_needed(m0, total_budget, "equispaced_mask");
  const auto avail = detail::free_units(m0);
  if (need > static_cast<int>(avail.size()))
    throw std::invalid_argument("equispaced_mask: budget exceeds free lines");
  std::vector<int> chosen;
  if (need > 0) {
    const int stride = static_cast<int>(avail.size()) / need;
    for (int i = 0; i < need; ++i) chosen.push_back(avail[static_cast<size_t>(i) * stride]);
  }
  return detail::with_units(m0, std::move(chosen));
}

}  // namespace fcs

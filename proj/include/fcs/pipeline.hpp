#pragma once

#include <algorithm>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fcs/cluster.hpp"
#include "fcs/grid.hpp"
#include "fcs/maskgen.hpp"
#include "fcs/recon.hpp"
#include "fcs/sampler.hpp"
#include "fcs/uncertainty.hpp"

namespace fcs {

/// The trained artifact: J (mask, reconstructor, centroid) triples plus the
/// configuration that produced them.
struct PairBank {
  int J = 0;
  std::vector<SamplingMask> masks;
  std::vector<ReconParams> thetas;
  std::vector<RealGrid> centroids;
  std::vector<uint8_t> tuned_on_full;  // cluster had no assigned points
  SamplingMask m0;
  SamplerSpec sampler;
  int S = 0;
  int total_budget = 0;

  void validate() const {
    if (J < 1 || static_cast<int>(masks.size()) != J || static_cast<int>(thetas.size()) != J ||
        static_cast<int>(centroids.size()) != J)
      throw std::invalid_argument("PairBank: inconsistent sizes");
    for (const auto& m : masks) {
      if (m.budget() != total_budget) throw std::invalid_argument("PairBank: mask budget mismatch");
      if (!m.contains(m0)) throw std::invalid_argument("PairBank: mask does not contain m0");
    }
  }
};

struct TrainConfig {
  SamplingMask m0;
  SamplerSpec sampler;
  int S = 32;
  int J = 3;
  int total_budget = 0;
  std::vector<ReconParams> recon_grid;
};

/// Per-item normalized k-space uncertainty from fresh conditioned samples.
inline NormalizedUncertainty quantify_uncertainty(const KGrid& full_k, const SamplingMask& m0,
                                                  SamplerSpec sampler, int S, uint64_t seed) {
  sampler.seed = seed;
  const KGrid lf_k = apply_mask(full_k, m0);
  const SampleEnsemble ens = draw_samples(lf_k, m0, sampler, S);
  return normalize_uncertainty(kspace_sample_variance(ens));
}

/// Training: quantify per-item uncertainty, cluster to J centroids, build a
/// rejection-sampled mask per centroid and tune its dedicated reconstructor
/// on the items assigned to that centroid.
inline PairBank train_adaptive(const std::vector<KGrid>& training_k, const TrainConfig& cfg,
                               uint64_t seed) {
  if (training_k.empty()) throw std::invalid_argument("train_adaptive: empty training set");
  if (cfg.S < 2) throw std::invalid_argument("train_adaptive: S must be >= 2");
  if (cfg.J < 1) throw std::invalid_argument("train_adaptive: J must be >= 1");
  if (cfg.recon_grid.empty()) throw std::invalid_argument("train_adaptive: empty recon grid");

  const int n = static_cast<int>(training_k.size());
  std::vector<NormalizedUncertainty> us;
  us.reserve(n);
  for (int i = 0; i < n; ++i)
    us.push_back(quantify_uncertainty(training_k[i], cfg.m0, cfg.sampler, cfg.S,
                                      mix_seed(seed, 0x7472'6169'6eULL + i)));

  const CentroidSet cs = kmeans_pp(us, cfg.J, mix_seed(seed, 0x636c'7573'7465'72ULL));

  std::vector<ImageGrid> images;
  images.reserve(n);
  for (const auto& k : training_k) images.push_back(idft2_unitary(k));

  PairBank bank;
  bank.J = cfg.J;
  bank.m0 = cfg.m0;
  bank.sampler = cfg.sampler;
  bank.S = cfg.S;
  bank.total_budget = cfg.total_budget;
  for (int j = 0; j < cfg.J; ++j) {
    bank.centroids.push_back(cs.centroids[j]);
    bank.masks.push_back(rejection_sample_mask(cs.centroids[j], cfg.m0, cfg.total_budget,
                                               mix_seed(seed, 0x6d61'736bULL + j)));

    std::vector<KGrid> ks;
    std::vector<ImageGrid> imgs;
    for (int i = 0; i < n; ++i)
      if (cs.assignment[i] == j) {
        ks.push_back(training_k[i]);
        imgs.push_back(images[i]);
      }
    const bool empty_cluster = ks.empty();
    if (empty_cluster) {
      ks = training_k;  // a pair must always be servable
      imgs = images;
    }
    bank.tuned_on_full.push_back(empty_cluster ? 1 : 0);
    bank.thetas.push_back(tune_theta(ks, imgs, bank.masks[j], cfg.recon_grid).first);
  }
  bank.validate();
  return bank;
}

/// Nearest centroid in Euclidean norm; ties go to the lowest index.
inline int select_index(const NormalizedUncertainty& u, const PairBank& bank) {
  if (bank.centroids.empty()) throw std::invalid_argument("select_index: empty bank");
  if (u.height != bank.centroids[0].height || u.width != bank.centroids[0].width)
    throw std::invalid_argument("select_index: shape mismatch");
  int best = 0;
  double best_d = detail::dist_sq(u.values, bank.centroids[0].values);
  for (int j = 1; j < bank.J; ++j) {
    const double d = detail::dist_sq(u.values, bank.centroids[j].values);
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  return best;
}

struct InferResult {
  ImageGrid image;
  int chosen = 0;
  NormalizedUncertainty u;
};

/// Inference: quantify uncertainty from the LF data, pick the nearest pair,
/// reconstruct with it. Unacquired coefficients of full_k are only read
/// through the chosen mask.
inline InferResult infer_adaptive(const KGrid& full_k, const PairBank& bank, uint64_t seed) {
  bank.validate();
  InferResult res;
  res.u = quantify_uncertainty(full_k, bank.m0, bank.sampler, bank.S, seed);
  res.chosen = select_index(res.u, bank);
  const SamplingMask& mask = bank.masks[res.chosen];
  res.image = reconstruct(apply_mask(full_k, mask), mask, bank.thetas[res.chosen]);
  return res;
}

// ---------------------------------------------------------------------------
// Exhaustive risk comparison of the three hypothesis classes on toy instances.
// ---------------------------------------------------------------------------

/// Tiny enumerable instance. Masks and the LF mask are bitmasks over the
/// signal indices. The toy reconstructor fills unacquired coefficients from a
/// template theta; the loss is the squared k-space error, which by Parseval
/// equals the image-domain squared error.
struct ToyHypothesisInstance {
  int length = 0;                                        // L <= 8
  std::vector<std::vector<std::complex<double>>> data;   // fully sampled k vectors
  std::vector<uint32_t> mask_space;                      // bitmasks over [0, L)
  std::vector<std::vector<std::complex<double>>> theta_space;  // fill templates
  uint32_t m0_bits = 1;                                  // LF signature mask
  int J = 2;
};

struct HypothesisRisks {
  double inf_h1 = 0.0;
  double inf_h2 = 0.0;
  double inf_h15 = 0.0;
};

namespace detail {

inline double toy_loss(const std::vector<std::complex<double>>& k, uint32_t mask,
                       const std::vector<std::complex<double>>& theta) {
  double s = 0.0;
  for (size_t l = 0; l < k.size(); ++l)
    if (!(mask >> l & 1u)) s += std::norm(theta[l] - k[l]);
  return s;
}

// Visit all subsets of {0..n-1} with 1..max_size elements.
template <typename Fn>
inline void for_each_subset(int n, int max_size, Fn&& fn) {
  std::vector<int> subset;
  auto rec = [&](auto&& self, int start) -> void {
    if (!subset.empty()) fn(subset);
    if (static_cast<int>(subset.size()) == max_size) return;
    for (int i = start; i < n; ++i) {
      subset.push_back(i);
      self(self, i + 1);
      subset.pop_back();
    }
  };
  rec(rec, 0);
}

}  // namespace detail

/// Exact infima of the empirical risk over three hypothesis classes, by
/// exhaustive enumeration: h1 = one fixed (mask, theta) pair; h2 = up to J
/// masks sharing a single theta; h15 = up to J dedicated (mask, theta) pairs.
/// h1 and h2 embed into h15, so inf_h15 can never exceed either.
inline HypothesisRisks hypothesis_risk_compare(const ToyHypothesisInstance& inst) {
  const int n = static_cast<int>(inst.data.size());
  const int nm = static_cast<int>(inst.mask_space.size());
  const int nt = static_cast<int>(inst.theta_space.size());
  if (inst.length < 1 || inst.length > 8) throw std::invalid_argument("toy: length must be in [1,8]");
  if (n < 1 || nm < 1 || nt < 1 || inst.J < 1) throw std::invalid_argument("toy: empty spaces");
  double work = static_cast<double>(nm) * nt * n;
  for (int j = 1; j < inst.J; ++j) work *= nm * nt;
  if (work > 1e7) throw std::invalid_argument("toy: instance too large for enumeration");

  // distinct LF signatures so the selectors may act per data point
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      double d = 0.0;
      for (int l = 0; l < inst.length; ++l)
        if (inst.m0_bits >> l & 1u) d += std::norm(inst.data[a][l] - inst.data[b][l]);
      if (d == 0.0) throw std::invalid_argument("toy: duplicate LF signatures");
    }

  // loss[i][m][t]
  std::vector<double> loss(static_cast<size_t>(n) * nm * nt);
  for (int i = 0; i < n; ++i)
    for (int m = 0; m < nm; ++m)
      for (int t = 0; t < nt; ++t)
        loss[(static_cast<size_t>(i) * nm + m) * nt + t] =
            detail::toy_loss(inst.data[i], inst.mask_space[m], inst.theta_space[t]);

  HypothesisRisks out;
  out.inf_h1 = std::numeric_limits<double>::max();
  for (int m = 0; m < nm; ++m)
    for (int t = 0; t < nt; ++t) {
      double risk = 0.0;
      for (int i = 0; i < n; ++i) risk += loss[(static_cast<size_t>(i) * nm + m) * nt + t];
      out.inf_h1 = std::min(out.inf_h1, risk / n);
    }

  out.inf_h2 = std::numeric_limits<double>::max();
  detail::for_each_subset(nm, inst.J, [&](const std::vector<int>& masks) {
    for (int t = 0; t < nt; ++t) {
      double risk = 0.0;
      for (int i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::max();
        for (int m : masks)
          best = std::min(best, loss[(static_cast<size_t>(i) * nm + m) * nt + t]);
        risk += best;
      }
      out.inf_h2 = std::min(out.inf_h2, risk / n);
    }
  });

  out.inf_h15 = std::numeric_limits<double>::max();
  detail::for_each_subset(nm * nt, inst.J, [&](const std::vector<int>& pairs) {
    double risk = 0.0;
    for (int i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::max();
      for (int p : pairs) {
        const int m = p / nt, t = p % nt;
        best = std::min(best, loss[(static_cast<size_t>(i) * nm + m) * nt + t]);
      }
      risk += best;
    }
    out.inf_h15 = std::min(out.inf_h15, risk / n);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Multislice acquisition ordering
// ---------------------------------------------------------------------------

enum class AcqPhase { acs, hf };

struct ScheduleEntry {
  int slice = 0;  // 1-based
  AcqPhase phase = AcqPhase::acs;
  int index = 0;  // 1-based within phase
};

/// All ACS lines for all slices first, interleaved slice-inner, then the HF
/// acquisitions in the same interleaving. The gap between a slice's last ACS
/// and first HF leaves room for uncertainty quantification of other slices.
inline std::vector<ScheduleEntry> multislice_schedule(int n_slices, int n_acs, int n_hf) {
  if (n_slices < 1 || n_acs < 1 || n_hf < 1)
    throw std::invalid_argument("multislice_schedule: counts must be >= 1");
  std::vector<ScheduleEntry> out;
  out.reserve(static_cast<size_t>(n_slices) * (n_acs + n_hf));
  for (int j = 1; j <= n_acs; ++j)
    for (int i = 1; i <= n_slices; ++i) out.push_back({i, AcqPhase::acs, j});
  for (int j = 1; j <= n_hf; ++j)
    for (int i = 1; i <= n_slices; ++i) out.push_back({i, AcqPhase::hf, j});
  return out;
}

}  // namespace fcs

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fcs/io.hpp"
#include "fcs/pipeline.hpp"

namespace fcs {

struct CheckVerdict {
  std::string name;
  bool pass = false;
  json details;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckVerdict> checks;

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  json to_json() const {
    json j;
    j["suite"] = suite;
    j["pass"] = pass();
    j["checks"] = json::array();
    for (const auto& c : checks)
      j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"details", c.details}});
    return j;
  }
};

namespace detail {

inline ImageGrid random_image(int h, int w, Rng& rng) {
  ImageGrid img(h, w);
  for (auto& p : img.pixels) p = rng.uniform();
  return img;
}

}  // namespace detail

/// Energy preservation and exact round-trip of the unitary transform,
/// including non-power-of-two shapes.
inline SuiteReport verify_parseval(uint64_t seed = 11) {
  SuiteReport rep;
  rep.suite = "parseval";
  Rng rng(seed);
  double max_energy_err = 0.0, max_roundtrip_err = 0.0;
  const std::pair<int, int> shapes[] = {{64, 64}, {32, 48}, {15, 17}, {1, 8}, {13, 1}};
  for (const auto& [h, w] : shapes)
    for (int trial = 0; trial < 10; ++trial) {
      const ImageGrid img = detail::random_image(h, w, rng);
      const KGrid k = dft2_unitary(img);
      const double ei = l2_norm_sq(img.pixels), ek = l2_norm_sq(k.coeffs);
      max_energy_err = std::max(max_energy_err, std::abs(ei - ek) / ei);
      const ImageGrid back = idft2_unitary(k);
      for (size_t i = 0; i < img.size(); ++i)
        max_roundtrip_err = std::max(max_roundtrip_err, std::abs(back.pixels[i] - img.pixels[i]));
    }
  rep.checks.push_back({"energy_preserved", max_energy_err < 1e-10,
                        {{"max_relative_error", max_energy_err}}});
  rep.checks.push_back({"roundtrip_exact", max_roundtrip_err < 1e-10,
                        {{"max_abs_error", max_roundtrip_err}}});
  return rep;
}

/// Descending-variance selection is the exact optimum: on 4x4 grids with the
/// closed-form sampler variance as weights, sorted_mask attains the brute-force
/// minimum of the unacquired-variance sum (equivalently, the maximum expected
/// zero-fill PSNR) over every budget-feasible completion of M0.
inline SuiteReport verify_prop1(uint64_t seed = 12) {
  SuiteReport rep;
  rep.suite = "prop1";
  Rng rng(seed);
  const SamplingMask m0 = lowfreq_mask(4, 4, MaskKind::point2d, 2);
  const auto free_cells = detail::free_units(m0);  // 12 cells
  const int need = 4;                              // budget 8 = |m0| + 4

  int optimal = 0, trials = 20;
  double worst_gap = 0.0;
  for (int t = 0; t < trials; ++t) {
    SamplerSpec spec;
    spec.alpha = 0.5 + 2.0 * rng.uniform();
    spec.amplitude = 0.5 + rng.uniform();
    spec.temperature = 0.5 + rng.uniform();
    const UncertaintyMap v = analytic_posterior_variance(m0, spec);

    const SamplingMask sorted = sorted_mask(v, m0, m0.budget() + need);
    const double est_sorted = estimate_unacquired_mse(v, sorted);

    double best = std::numeric_limits<double>::max();
    std::vector<int> pick(need);
    auto rec = [&](auto&& self, int start, int depth) -> void {
      if (depth == need) {
        std::vector<int> acq = m0.acquired;
        for (int i : pick) acq.push_back(i);
        best = std::min(best,
                        estimate_unacquired_mse(v, make_mask(4, 4, MaskKind::point2d, acq)));
        return;
      }
      for (int i = start; i < static_cast<int>(free_cells.size()); ++i) {
        pick[depth] = free_cells[i];
        self(self, i + 1, depth + 1);
      }
    };
    rec(rec, 0, 0);

    const double gap = est_sorted - best;
    worst_gap = std::max(worst_gap, gap);
    if (gap <= 1e-12) ++optimal;
  }
  rep.checks.push_back({"sorted_mask_attains_bruteforce_optimum", optimal == trials,
                        {{"optimal_trials", optimal}, {"trials", trials},
                         {"worst_gap", worst_gap}}});
  return rep;
}

/// The componentwise variance does not commute with the inverse transform:
/// for iid unit-variance inputs the true variance of component 2 is 1 while
/// the transformed variance vector is 0 there.
inline SuiteReport verify_theorem_s1(uint64_t seed = 13) {
  SuiteReport rep;
  rep.suite = "theorem_s1";
  const TheoremS1Report r = theorem_s1_check(4, 100000, seed);
  rep.checks.push_back({"lhs_near_one", std::abs(r.lhs - 1.0) < 0.05, {{"lhs", r.lhs}}});
  rep.checks.push_back({"rhs_near_zero", std::abs(r.rhs) < 0.05, {{"rhs", r.rhs}}});
  rep.checks.push_back({"distinct", r.distinct, {{"distinct", r.distinct}}});
  return rep;
}

/// Risk ordering of the hypothesis classes on 100 random exhaustively
/// enumerable instances: the per-input pair selector is never worse than
/// either the single fixed pair or the shared-reconstructor class, and
/// strictly better on at least one instance for each comparison.
inline SuiteReport verify_theorems12(uint64_t seed = 14) {
  SuiteReport rep;
  rep.suite = "theorems12";
  Rng rng(seed);
  const int L = 4, n_masks = 4, n_thetas = 3, n_data = 4, n_instances = 100;
  int hold_h1 = 0, hold_h2 = 0, strict_h1 = 0, strict_h2 = 0;
  for (int t = 0; t < n_instances; ++t) {
    ToyHypothesisInstance inst;
    inst.length = L;
    inst.J = 2;
    inst.m0_bits = 1;  // index 0 is the LF signature
    for (int i = 0; i < n_data; ++i) {
      std::vector<std::complex<double>> k(L);
      for (auto& c : k) c = {rng.normal(), rng.normal()};
      inst.data.push_back(std::move(k));
    }
    for (int m = 0; m < n_masks; ++m)
      inst.mask_space.push_back(1u | static_cast<uint32_t>(rng.below(1u << (L - 1))) << 1);
    for (int s = 0; s < n_thetas; ++s) {
      std::vector<std::complex<double>> th(L);
      for (auto& c : th) c = {rng.normal(), rng.normal()};
      inst.theta_space.push_back(std::move(th));
    }
    const HypothesisRisks r = hypothesis_risk_compare(inst);
    if (r.inf_h15 <= r.inf_h1 + 1e-12) ++hold_h1;
    if (r.inf_h15 <= r.inf_h2 + 1e-12) ++hold_h2;
    if (r.inf_h15 < r.inf_h1 - 1e-9) ++strict_h1;
    if (r.inf_h15 < r.inf_h2 - 1e-9) ++strict_h2;
  }
  rep.checks.push_back({"h15_le_h1_all", hold_h1 == n_instances,
                        {{"holds", hold_h1}, {"instances", n_instances}}});
  rep.checks.push_back({"h15_le_h2_all", hold_h2 == n_instances,
                        {{"holds", hold_h2}, {"instances", n_instances}}});
  rep.checks.push_back({"strict_gap_found", strict_h1 >= 1 && strict_h2 >= 1,
                        {{"strict_vs_h1", strict_h1}, {"strict_vs_h2", strict_h2}}});
  return rep;
}

/// Sample-variance estimator consistency on the closed-form model: the
/// unacquired-variance sum from 4096 draws matches the analytic value within
/// 5%, and matches the Monte-Carlo squared error of the posterior-mean
/// (zero-fill) reconstruction within 10%.
inline SuiteReport verify_estimator(uint64_t seed = 15) {
  SuiteReport rep;
  rep.suite = "estimator";
  const int h = 16, w = 16, S = 4096;
  const SamplingMask m0 = lowfreq_mask(h, w, MaskKind::point2d, 5);  // odd: conjugate symmetric
  SamplerSpec spec;
  spec.alpha = 1.0;
  spec.amplitude = 1.0;
  spec.temperature = 1.0;
  spec.seed = mix_seed(seed, 1);

  Rng rng(seed);
  const ImageGrid truth = detail::random_image(h, w, rng);
  const KGrid lf_k = apply_mask(dft2_unitary(truth), m0);

  const UncertaintyMap v = kspace_sample_variance(draw_samples(lf_k, m0, spec, S));
  const UncertaintyMap oracle = analytic_posterior_variance(m0, spec);
  const double est = estimate_unacquired_mse(v, m0);
  const double est_oracle = estimate_unacquired_mse(oracle, m0);
  const double rel_vs_analytic = std::abs(est - est_oracle) / est_oracle;
  rep.checks.push_back({"matches_analytic_5pct", rel_vs_analytic < 0.05,
                        {{"estimate", est}, {"analytic", est_oracle},
                         {"relative_error", rel_vs_analytic}}});

  // Fresh draws; posterior mean of the free coefficients is zero, so the
  // posterior-mean reconstruction is the zero-fill of the conditioning data.
  SamplerSpec fresh = spec;
  fresh.seed = mix_seed(seed, 2);
  const ImageGrid zf = zero_fill_recon(lf_k, m0);
  const SampleEnsemble ens = draw_samples(lf_k, m0, fresh, S);
  double mc = 0.0;
  for (const auto& s : ens.samples) {
    double e = 0.0;
    for (size_t i = 0; i < s.size(); ++i) {
      const double d = s.pixels[i] - zf.pixels[i];
      e += d * d;
    }
    mc += e;
  }
  mc /= S;
  const double rel_vs_mc = std::abs(est - mc) / mc;
  rep.checks.push_back({"matches_mc_recon_mse_10pct", rel_vs_mc < 0.10,
                        {{"estimate", est}, {"mc_mse", mc}, {"relative_error", rel_vs_mc}}});
  return rep;
}

inline std::vector<SuiteReport> run_verify(const std::string& suite, uint64_t seed = 0) {
  std::vector<SuiteReport> out;
  const bool all = suite == "all";
  if (all || suite == "parseval") out.push_back(verify_parseval(mix_seed(seed, 11)));
  if (all || suite == "prop1") out.push_back(verify_prop1(mix_seed(seed, 12)));
  if (all || suite == "theorem_s1") out.push_back(verify_theorem_s1(mix_seed(seed, 13)));
  if (all || suite == "theorems12") out.push_back(verify_theorems12(mix_seed(seed, 14)));
  if (all || suite == "estimator") out.push_back(verify_estimator(mix_seed(seed, 15)));
  if (out.empty()) throw std::invalid_argument("run_verify: unknown suite '" + suite + "'");
  return out;
}

}  // namespace fcs

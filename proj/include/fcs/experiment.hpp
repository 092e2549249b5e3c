#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fcs/io.hpp"
#include "fcs/phantom.hpp"
#include "fcs/pipeline.hpp"

namespace fcs {

// ---------------------------------------------------------------------------
// Dataset synthesis and ingestion
// ---------------------------------------------------------------------------

inline PhantomKind phantom_kind_from_string(const std::string& s) {
  if (s == "stripes_h") return PhantomKind::stripes_h;
  if (s == "stripes_v") return PhantomKind::stripes_v;
  if (s == "haar_sparse") return PhantomKind::haar_sparse;
  if (s == "smooth_blobs") return PhantomKind::smooth_blobs;
  throw std::runtime_error("unknown phantom kind '" + s + "'");
}

inline std::string to_string(PhantomKind k) {
  switch (k) {
    case PhantomKind::stripes_h: return "stripes_h";
    case PhantomKind::stripes_v: return "stripes_v";
    case PhantomKind::haar_sparse: return "haar_sparse";
    case PhantomKind::smooth_blobs: return "smooth_blobs";
  }
  return "?";
}

/// Write `count` deterministic phantom PGMs into dir and record them in the
/// directory manifest (merged if one already exists).
inline std::vector<fs::path> generate_phantoms(PhantomKind kind, int count, int height, int width,
                                               uint64_t seed, const fs::path& dir) {
  if (count < 1) throw std::invalid_argument("generate_phantoms: count must be >= 1");
  fs::create_directories(dir);
  json manifest;
  const fs::path manifest_path = dir / "manifest.json";
  if (fs::exists(manifest_path)) {
    std::ifstream in(manifest_path);
    manifest = json::parse(in);
  } else {
    manifest["entries"] = json::array();
  }
  std::vector<fs::path> files;
  for (int i = 0; i < count; ++i) {
    const ImageGrid img = make_phantom(kind, height, width, mix_seed(seed, i));
    std::ostringstream name;
    name << to_string(kind) << "_" << std::setw(4) << std::setfill('0') << i << ".pgm";
    const fs::path path = dir / name.str();
    write_pgm16(img, path);
    files.push_back(path);
    manifest["entries"].push_back({{"file", name.str()},
                                   {"kind", to_string(kind)},
                                   {"seed", seed},
                                   {"index", i},
                                   {"height", height},
                                   {"width", width}});
  }
  std::ofstream out(manifest_path);
  out << manifest.dump(2) << "\n";
  return files;
}

struct DatasetItem {
  std::string name;
  ImageGrid image;
  KGrid k;
};

/// Load every .pgm in the directory in sorted-name order and pair each image
/// with its unitary k-space transform.
inline std::vector<DatasetItem> ingest_dataset(const fs::path& dir) {
  if (!fs::is_directory(dir))
    throw std::runtime_error("ingest_dataset: not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".pgm") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw std::runtime_error("ingest_dataset: no .pgm files in " + dir.string());
  std::vector<DatasetItem> items;
  items.reserve(files.size());
  for (const auto& f : files) {
    DatasetItem item;
    item.name = f.filename().string();
    item.image = read_pgm16(f);
    item.k = dft2_unitary(item.image);
    items.push_back(std::move(item));
  }
  return items;
}

// ---------------------------------------------------------------------------
// Experiment configuration
// ---------------------------------------------------------------------------

struct ExperimentConfig {
  fs::path dataset_dir;
  int height = 64, width = 64;
  MaskKind kind = MaskKind::point2d;
  int lf_extent = 8;
  std::vector<int> accels;
  std::vector<std::string> methods;
  std::vector<int> js;
  int S = 32;
  SamplerSpec sampler;
  std::vector<ReconParams> recon_grid;
  uint64_t seed = 0;
  double train_frac = 0.75;
};

inline const std::vector<std::string>& known_methods() {
  static const std::vector<std::string> methods = {
      "random", "vd", "equispaced", "sorted-self", "sorted-another", "centroid-sorted", "adaptive"};
  return methods;
}

inline ExperimentConfig experiment_config_from_json(const json& j) {
  auto need = [&](const char* field) -> const json& {
    if (!j.contains(field))
      throw std::runtime_error(std::string("config: missing field '") + field + "'");
    return j.at(field);
  };
  ExperimentConfig cfg;
  cfg.dataset_dir = need("dataset_dir").get<std::string>();
  const auto& shape = need("shape");
  if (!shape.is_array() || shape.size() != 2)
    throw std::runtime_error("config: 'shape' must be [height, width]");
  cfg.height = shape.at(0).get<int>();
  cfg.width = shape.at(1).get<int>();
  const std::string kind = need("kind").get<std::string>();
  if (kind == "point2d")
    cfg.kind = MaskKind::point2d;
  else if (kind == "line1d")
    cfg.kind = MaskKind::line1d;
  else
    throw std::runtime_error("config: 'kind' must be point2d or line1d");
  cfg.lf_extent = need("lf_extent").get<int>();
  cfg.accels = need("accel").get<std::vector<int>>();
  cfg.methods = need("methods").get<std::vector<std::string>>();
  if (cfg.methods.empty()) throw std::runtime_error("config: 'methods' must be nonempty");
  for (const auto& m : cfg.methods)
    if (std::find(known_methods().begin(), known_methods().end(), m) == known_methods().end())
      throw std::runtime_error("config: unknown method '" + m + "' in 'methods'");
  cfg.js = need("J").get<std::vector<int>>();
  if (cfg.js.empty()) throw std::runtime_error("config: 'J' must be nonempty");
  cfg.S = need("S").get<int>();
  cfg.sampler = sampler_from_json(need("sampler"));
  for (const auto& r : need("recon_grid"))
    cfg.recon_grid.push_back(recon_from_json(r));
  if (cfg.recon_grid.empty()) throw std::runtime_error("config: 'recon_grid' must be nonempty");
  cfg.seed = j.value("seed", static_cast<uint64_t>(0));
  cfg.train_frac = j.value("train_frac", 0.75);
  if (cfg.train_frac <= 0.0 || cfg.train_frac >= 1.0)
    throw std::runtime_error("config: 'train_frac' must be in (0, 1)");
  if (cfg.accels.empty()) throw std::runtime_error("config: 'accel' must be nonempty");
  return cfg;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

struct ItemScore {
  std::string item;
  double psnr_db = 0.0;
  double ssim_val = 0.0;
  int chosen = -1;  // selected pair index, adaptive-style methods only
};

struct MethodScores {
  std::string method;
  int accel = 0;
  int j = 0;
  std::vector<ItemScore> items;
  long long runtime_ms = 0;

  double psnr_mean() const {
    double s = 0.0;
    for (const auto& it : items) s += it.psnr_db;
    return s / items.size();
  }
  double ssim_mean() const {
    double s = 0.0;
    for (const auto& it : items) s += it.ssim_val;
    return s / items.size();
  }
  /// Mean of the lowest `frac` SSIM values (at least one item).
  double ssim_low(double frac) const {
    std::vector<double> v;
    v.reserve(items.size());
    for (const auto& it : items) v.push_back(it.ssim_val);
    std::sort(v.begin(), v.end());
    const size_t n = std::max<size_t>(1, static_cast<size_t>(std::floor(v.size() * frac)));
    return std::accumulate(v.begin(), v.begin() + n, 0.0) / n;
  }
};

namespace detail {

inline int budget_for_accel(int h, int w, MaskKind kind, int accel) {
  if (kind == MaskKind::point2d) return h * w / accel;
  return (w / accel) * h;
}

// Split indices of the sorted dataset: seed-shuffled, first train_frac train.
inline std::pair<std::vector<int>, std::vector<int>> split_dataset(int n, double train_frac,
                                                                   uint64_t seed) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(mix_seed(seed, 0x7370'6c69'74ULL));
  for (int i = n - 1; i > 0; --i)
    std::swap(order[i], order[rng.below(static_cast<uint64_t>(i) + 1)]);
  const int n_train = std::clamp(static_cast<int>(std::lround(n * train_frac)), 1, n - 1);
  std::vector<int> train(order.begin(), order.begin() + n_train);
  std::vector<int> val(order.begin() + n_train, order.end());
  return {train, val};
}

inline UncertaintyMap item_variance(const KGrid& full_k, const SamplingMask& m0,
                                    SamplerSpec sampler, int S, uint64_t seed) {
  sampler.seed = seed;
  const KGrid lf = apply_mask(full_k, m0);
  return kspace_sample_variance(draw_samples(lf, m0, sampler, S));
}

// Risk of a candidate theta when every item carries its own mask.
inline ReconParams tune_theta_per_item_masks(const std::vector<const DatasetItem*>& items,
                                             const std::vector<SamplingMask>& masks,
                                             const std::vector<ReconParams>& grid) {
  ReconParams best = grid[0];
  double best_risk = std::numeric_limits<double>::max();
  for (const auto& cand : grid) {
    double risk = 0.0;
    for (size_t i = 0; i < items.size(); ++i) {
      const ImageGrid rec =
          reconstruct(apply_mask(items[i]->k, masks[i]), masks[i], cand);
      risk += ssim_loss(items[i]->image, rec);
    }
    if (risk < best_risk) {
      best_risk = risk;
      best = cand;
    }
  }
  return best;
}

}  // namespace detail

struct ExperimentResult {
  std::string dataset_id;
  uint64_t seed = 0;
  std::vector<MethodScores> rows;
};

/// Run the full protocol: split the dataset, build/tune every requested
/// method at every acceleration and J, score the held-out split.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                       const fs::path& artifact_dir) {
  const auto dataset = ingest_dataset(cfg.dataset_dir);
  for (const auto& item : dataset)
    if (item.image.height != cfg.height || item.image.width != cfg.width)
      throw std::runtime_error("run_experiment: dataset image shape differs from config shape");
  const int n = static_cast<int>(dataset.size());
  auto [train_idx, val_idx] = detail::split_dataset(n, cfg.train_frac, cfg.seed);
  std::sort(train_idx.begin(), train_idx.end());

  std::vector<const DatasetItem*> train;
  std::vector<KGrid> train_k;
  std::vector<ImageGrid> train_img;
  for (int i : train_idx) {
    train.push_back(&dataset[i]);
    train_k.push_back(dataset[i].k);
    train_img.push_back(dataset[i].image);
  }

  const SamplingMask m0 = lowfreq_mask(cfg.height, cfg.width, cfg.kind, cfg.lf_extent);
  fs::create_directories(artifact_dir);

  ExperimentResult result;
  result.dataset_id = cfg.dataset_dir.filename().string();
  result.seed = cfg.seed;

  for (int accel : cfg.accels) {
    const int budget = detail::budget_for_accel(cfg.height, cfg.width, cfg.kind, accel);

    // Per-item sampled variances, shared by the sorted/centroid/adaptive
    // methods at this acceleration. Seeds derive from the item's position in
    // the sorted dataset, so train/val membership does not perturb them.
    std::vector<UncertaintyMap> variances(n);
    std::vector<char> have_var(n, 0);
    auto variance_of = [&](int i) -> const UncertaintyMap& {
      if (!have_var[i]) {
        variances[i] = detail::item_variance(dataset[i].k, m0, cfg.sampler, cfg.S,
                                             mix_seed(cfg.seed, 0x7661'72ULL + i));
        have_var[i] = 1;
      }
      return variances[i];
    };

    for (int J : cfg.js) {
      for (const auto& method : cfg.methods) {
        const auto t0 = std::chrono::steady_clock::now();
        MethodScores scores;
        scores.method = method;
        scores.accel = accel;
        scores.j = J;

        auto score_item = [&](int i, const ImageGrid& rec, int chosen) {
          ItemScore s;
          s.item = dataset[i].name;
          s.psnr_db = psnr(dataset[i].image, rec);
          s.ssim_val = ssim(dataset[i].image, rec);
          s.chosen = chosen;
          scores.items.push_back(std::move(s));
        };

        if (method == "random" || method == "vd" || method == "equispaced") {
          SamplingMask mask;
          const uint64_t mseed = mix_seed(cfg.seed, std::hash<std::string>{}(method) ^ accel);
          if (method == "random")
            mask = random_mask(cfg.height, cfg.width, cfg.kind, m0, budget, mseed);
          else if (method == "vd")
            mask = vd_mask(cfg.height, cfg.width, cfg.kind, m0, budget, 1.5, mseed);
          else
            mask = equispaced_mask(cfg.height, cfg.width, m0, budget);
          const ReconParams theta = tune_theta(train_k, train_img, mask, cfg.recon_grid).first;
          for (int i : val_idx)
            score_item(i, reconstruct(apply_mask(dataset[i].k, mask), mask, theta), -1);
        } else if (method == "sorted-self" || method == "sorted-another") {
          std::vector<SamplingMask> train_masks, val_masks;
          for (int i : train_idx)
            train_masks.push_back(sorted_mask(variance_of(i), m0, budget));
          for (int i : val_idx) val_masks.push_back(sorted_mask(variance_of(i), m0, budget));
          if (method == "sorted-another" && val_idx.size() > 1) {
            // derangement: rotate by one in a seed-shuffled order
            std::vector<int> perm(val_idx.size());
            std::iota(perm.begin(), perm.end(), 0);
            Rng rng(mix_seed(cfg.seed, 0x616e'6f74'6865'72ULL + accel));
            for (int i = static_cast<int>(perm.size()) - 1; i > 0; --i)
              std::swap(perm[i], perm[rng.below(static_cast<uint64_t>(i) + 1)]);
            std::vector<SamplingMask> shuffled(val_masks.size());
            for (size_t p = 0; p < perm.size(); ++p)
              shuffled[perm[p]] = val_masks[perm[(p + 1) % perm.size()]];
            val_masks = std::move(shuffled);
          }
          const ReconParams theta =
              detail::tune_theta_per_item_masks(train, train_masks, cfg.recon_grid);
          for (size_t p = 0; p < val_idx.size(); ++p) {
            const int i = val_idx[p];
            score_item(i,
                       reconstruct(apply_mask(dataset[i].k, val_masks[p]), val_masks[p], theta),
                       -1);
          }
        } else if (method == "centroid-sorted") {
          std::vector<NormalizedUncertainty> us;
          for (int i : train_idx) us.push_back(normalize_uncertainty(variance_of(i)));
          const CentroidSet cs = kmeans_pp(us, J, mix_seed(cfg.seed, 0x6373'6f72'74ULL + accel));
          std::vector<SamplingMask> masks;
          std::vector<ReconParams> thetas;
          for (int j = 0; j < J; ++j) {
            masks.push_back(sorted_mask(cs.centroids[j], m0, budget));
            std::vector<KGrid> ks;
            std::vector<ImageGrid> imgs;
            for (size_t p = 0; p < train_idx.size(); ++p)
              if (cs.assignment[p] == j) {
                ks.push_back(train_k[p]);
                imgs.push_back(train_img[p]);
              }
            if (ks.empty()) {
              ks = train_k;
              imgs = train_img;
            }
            thetas.push_back(tune_theta(ks, imgs, masks[j], cfg.recon_grid).first);
          }
          for (int i : val_idx) {
            const NormalizedUncertainty u = normalize_uncertainty(variance_of(i));
            int best = 0;
            double best_d = detail::dist_sq(u.values, cs.centroids[0].values);
            for (int j = 1; j < J; ++j) {
              const double d = detail::dist_sq(u.values, cs.centroids[j].values);
              if (d < best_d) {
                best_d = d;
                best = j;
              }
            }
            score_item(i, reconstruct(apply_mask(dataset[i].k, masks[best]), masks[best],
                                      thetas[best]),
                       best);
          }
        } else if (method == "adaptive") {
          TrainConfig tc;
          tc.m0 = m0;
          tc.sampler = cfg.sampler;
          tc.S = cfg.S;
          tc.J = J;
          tc.total_budget = budget;
          tc.recon_grid = cfg.recon_grid;
          const PairBank bank = train_adaptive(train_k, tc, mix_seed(cfg.seed, 0x6164'6170'74ULL));
          {
            std::ostringstream dir;
            dir << "pairbank_a" << accel << "_j" << J;
            save_pair_bank(bank, artifact_dir / dir.str());
          }
          for (int i : val_idx) {
            const InferResult res =
                infer_adaptive(dataset[i].k, bank, mix_seed(cfg.seed, 0x696e'6665'72ULL + i));
            score_item(i, res.image, res.chosen);
          }
        }

        scores.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
        result.rows.push_back(std::move(scores));
      }
    }
  }
  return result;
}

/// results.csv is byte-deterministic for a fixed config+seed; wall-clock
/// timings therefore go to the timings.csv sidecar and the runtime_ms column
/// is pinned to 0.
inline void write_results_csv(const ExperimentResult& result, const fs::path& csv_path,
                              const fs::path& per_image_path, const fs::path& timings_path) {
  auto fmt = [](double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6) << v;
    return os.str();
  };
  {
    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("write_results_csv: cannot open " + csv_path.string());
    out << "dataset_id,method,accel,J,psnr_mean,ssim_mean,ssim_p5,ssim_p10,runtime_ms,seed\n";
    for (const auto& row : result.rows)
      out << result.dataset_id << "," << row.method << "," << row.accel << "," << row.j << ","
          << fmt(row.psnr_mean()) << "," << fmt(row.ssim_mean()) << "," << fmt(row.ssim_low(0.05))
          << "," << fmt(row.ssim_low(0.10)) << ",0," << result.seed << "\n";
  }
  {
    std::ofstream out(per_image_path);
    out << "dataset_id,method,accel,J,item,psnr,ssim,chosen\n";
    for (const auto& row : result.rows)
      for (const auto& it : row.items)
        out << result.dataset_id << "," << row.method << "," << row.accel << "," << row.j << ","
            << it.item << "," << fmt(it.psnr_db) << "," << fmt(it.ssim_val) << "," << it.chosen
            << "\n";
  }
  {
    std::ofstream out(timings_path);
    out << "dataset_id,method,accel,J,runtime_ms\n";
    for (const auto& row : result.rows)
      out << result.dataset_id << "," << row.method << "," << row.accel << "," << row.j << ","
          << row.runtime_ms << "\n";
  }
}

}  // namespace fcs

#include <catch2/catch_amalgamated.hpp>

#include <fstream>

#include "fcs/experiment.hpp"

using namespace fcs;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("fcs_exp_" + std::to_string(Catch::rngSeed()) + "_" +
            std::to_string(reinterpret_cast<uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json base_config(const fs::path& dataset) {
  return json{{"dataset_dir", dataset.string()},
              {"shape", {32, 32}},
              {"kind", "point2d"},
              {"lf_extent", 5},
              {"accel", {4}},
              {"methods", {"random", "sorted-self"}},
              {"J", {1}},
              {"S", 8},
              {"sampler", {{"variant", "gaussian_spectral"}}},
              {"recon_grid", {{{"variant", "zero_fill"}}}},
              {"seed", 3},
              {"train_frac", 0.75}};
}

}  // namespace

TEST_CASE("generate_phantoms writes the requested files with a manifest") {
  TempDir tmp;
  const auto files = generate_phantoms(PhantomKind::smooth_blobs, 5, 16, 16, 7, tmp.path / "d");
  CHECK(files.size() == 5);
  for (const auto& f : files) CHECK(fs::exists(f));
  std::ifstream in(tmp.path / "d" / "manifest.json");
  const json manifest = json::parse(in);
  CHECK(manifest.at("entries").size() == 5);

  // second kind merges into the same manifest
  generate_phantoms(PhantomKind::stripes_h, 2, 16, 16, 8, tmp.path / "d");
  std::ifstream in2(tmp.path / "d" / "manifest.json");
  CHECK(json::parse(in2).at("entries").size() == 7);
}

TEST_CASE("ingest round-trips generated phantoms within quantization") {
  TempDir tmp;
  generate_phantoms(PhantomKind::stripes_v, 3, 16, 16, 5, tmp.path / "d");
  const auto items = ingest_dataset(tmp.path / "d");
  REQUIRE(items.size() == 3);
  CHECK(items[0].name < items[1].name);  // sorted by filename
  for (int i = 0; i < 3; ++i) {
    const ImageGrid direct = make_phantom(PhantomKind::stripes_v, 16, 16, mix_seed(5, i));
    for (size_t p = 0; p < direct.size(); ++p)
      CHECK(std::abs(items[i].image.pixels[p] - direct.pixels[p]) <= 0.5 / 65535.0 + 1e-12);
  }
  CHECK_THROWS_AS(ingest_dataset(tmp.path / "missing"), std::runtime_error);
}

TEST_CASE("config parsing reports the offending field") {
  TempDir tmp;
  json cfg = base_config(tmp.path);
  cfg.erase("shape");
  CHECK_THROWS_WITH(experiment_config_from_json(cfg),
                    Catch::Matchers::ContainsSubstring("'shape'"));
  cfg = base_config(tmp.path);
  cfg["methods"] = json::array();
  CHECK_THROWS_WITH(experiment_config_from_json(cfg),
                    Catch::Matchers::ContainsSubstring("'methods'"));
  cfg = base_config(tmp.path);
  cfg["methods"] = {"random", "bogus"};
  CHECK_THROWS_WITH(experiment_config_from_json(cfg),
                    Catch::Matchers::ContainsSubstring("bogus"));
  cfg = base_config(tmp.path);
  cfg["kind"] = "diagonal";
  CHECK_THROWS_WITH(experiment_config_from_json(cfg),
                    Catch::Matchers::ContainsSubstring("'kind'"));
  cfg = base_config(tmp.path);
  cfg["train_frac"] = 1.5;
  CHECK_THROWS_WITH(experiment_config_from_json(cfg),
                    Catch::Matchers::ContainsSubstring("'train_frac'"));
}

TEST_CASE("run_experiment emits one row per method x accel x J and is byte-deterministic") {
  TempDir tmp;
  generate_phantoms(PhantomKind::smooth_blobs, 8, 32, 32, 21, tmp.path / "data");
  json j = base_config(tmp.path / "data");
  j["accel"] = {4, 8};
  const ExperimentConfig cfg = experiment_config_from_json(j);

  const ExperimentResult res = run_experiment(cfg, tmp.path / "art1");
  CHECK(res.rows.size() == 2 * 2 * 1);  // methods x accels x J
  for (const auto& row : res.rows) CHECK(row.items.size() == 2);  // 25% of 8 held out

  write_results_csv(res, tmp.path / "r1.csv", tmp.path / "p1.csv", tmp.path / "t1.csv");
  const ExperimentResult res2 = run_experiment(cfg, tmp.path / "art2");
  write_results_csv(res2, tmp.path / "r2.csv", tmp.path / "p2.csv", tmp.path / "t2.csv");
  CHECK(slurp(tmp.path / "r1.csv") == slurp(tmp.path / "r2.csv"));
  CHECK(slurp(tmp.path / "p1.csv") == slurp(tmp.path / "p2.csv"));

  // header shape
  const std::string csv = slurp(tmp.path / "r1.csv");
  CHECK(csv.rfind("dataset_id,method,accel,J,psnr_mean,ssim_mean,ssim_p5,ssim_p10,runtime_ms,seed",
                  0) == 0);
}

TEST_CASE("adaptive method writes a loadable pair bank artifact") {
  TempDir tmp;
  generate_phantoms(PhantomKind::stripes_h, 4, 32, 32, 31, tmp.path / "data");
  generate_phantoms(PhantomKind::stripes_v, 4, 32, 32, 32, tmp.path / "data");
  json j = base_config(tmp.path / "data");
  j["methods"] = {"adaptive", "centroid-sorted", "vd", "equispaced", "sorted-another"};
  j["kind"] = "line1d";
  j["J"] = {2};
  const ExperimentConfig cfg = experiment_config_from_json(j);
  const ExperimentResult res = run_experiment(cfg, tmp.path / "art");
  CHECK(res.rows.size() == 5);
  const PairBank bank = load_pair_bank(tmp.path / "art" / "pairbank_a4_j2");
  CHECK(bank.J == 2);
  for (const auto& row : res.rows)
    if (row.method == "adaptive")
      for (const auto& it : row.items) CHECK((it.chosen == 0 || it.chosen == 1));
}

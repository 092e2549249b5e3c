// Command-line front end: train / infer / eval / masks / phantom / verify.
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fcs/experiment.hpp"
#include "fcs/verify.hpp"

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

fcs::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  try {
    return fcs::json::parse(in);
  } catch (const std::exception& e) {
    throw ConfigError("invalid JSON in " + path + ": " + e.what());
  }
}

std::pair<int, int> parse_shape(const std::string& s) {
  const auto x = s.find('x');
  if (x == std::string::npos) throw ConfigError("shape must be HxW, got '" + s + "'");
  try {
    return {std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1))};
  } catch (const std::exception&) {
    throw ConfigError("shape must be HxW, got '" + s + "'");
  }
}

int cmd_train(const std::string& config_path, const std::string& out_dir) {
  const fcs::json j = load_json(config_path);
  auto need = [&](const char* f) -> const fcs::json& {
    if (!j.contains(f)) throw ConfigError(std::string("train config: missing field '") + f + "'");
    return j.at(f);
  };
  const auto shape = need("shape");
  if (!shape.is_array() || shape.size() != 2)
    throw ConfigError("train config: 'shape' must be [height, width]");
  const int h = shape.at(0).get<int>(), w = shape.at(1).get<int>();
  const std::string kind_str = need("kind").get<std::string>();
  fcs::MaskKind kind;
  if (kind_str == "point2d")
    kind = fcs::MaskKind::point2d;
  else if (kind_str == "line1d")
    kind = fcs::MaskKind::line1d;
  else
    throw ConfigError("train config: 'kind' must be point2d or line1d");

  fcs::TrainConfig tc;
  tc.m0 = fcs::lowfreq_mask(h, w, kind, need("lf_extent").get<int>());
  tc.sampler = fcs::sampler_from_json(need("sampler"));
  tc.S = need("S").get<int>();
  tc.J = need("J").get<int>();
  tc.total_budget =
      fcs::detail::budget_for_accel(h, w, kind, need("accel").get<int>());
  for (const auto& r : need("recon_grid")) tc.recon_grid.push_back(fcs::recon_from_json(r));
  const uint64_t seed = j.value("seed", static_cast<uint64_t>(0));

  const auto dataset = fcs::ingest_dataset(need("dataset_dir").get<std::string>());
  std::vector<fcs::KGrid> ks;
  for (const auto& item : dataset) {
    if (item.image.height != h || item.image.width != w)
      throw ConfigError("train config: dataset image shape differs from 'shape'");
    ks.push_back(item.k);
  }
  const fcs::PairBank bank = fcs::train_adaptive(ks, tc, seed);
  fcs::save_pair_bank(bank, out_dir);
  std::cout << "trained bank with J=" << bank.J << " -> " << out_dir << "\n";
  return 0;
}

int cmd_infer(const std::string& bank_dir, const std::string& input, const std::string& out,
              const std::string& row_path, uint64_t seed) {
  const fcs::PairBank bank = fcs::load_pair_bank(bank_dir);
  const fcs::KGrid k = fcs::read_kgrid(input);
  const fcs::InferResult res = fcs::infer_adaptive(k, bank, seed);
  fcs::write_pgm16(res.image, out);
  if (!row_path.empty()) {
    const bool fresh = !fcs::fs::exists(row_path);
    std::ofstream csv(row_path, std::ios::app);
    if (!csv) throw ConfigError("cannot open row file: " + row_path);
    if (fresh) csv << "input,chosen,output\n";
    csv << fcs::fs::path(input).filename().string() << "," << res.chosen << ","
        << fcs::fs::path(out).filename().string() << "\n";
  }
  std::cout << "chosen pair " << res.chosen << " -> " << out << "\n";
  return 0;
}

int cmd_eval(const std::string& config_path, const std::string& out_csv) {
  const fcs::ExperimentConfig cfg = fcs::experiment_config_from_json(load_json(config_path));
  const fcs::fs::path csv_path(out_csv);
  const fcs::fs::path dir = csv_path.parent_path().empty() ? "." : csv_path.parent_path();
  const fcs::ExperimentResult result = fcs::run_experiment(cfg, dir / "artifacts");
  fcs::write_results_csv(result, csv_path, dir / "results_per_image.csv", dir / "timings.csv");
  std::cout << result.rows.size() << " rows -> " << out_csv << "\n";
  return 0;
}

int cmd_masks(const std::string& kind, int accel, const std::string& shape_str,
              const std::string& layout_str, int lf_extent, uint64_t seed,
              const std::string& out) {
  const auto [h, w] = parse_shape(shape_str);
  fcs::MaskKind layout;
  if (layout_str == "point2d")
    layout = fcs::MaskKind::point2d;
  else if (layout_str == "line1d")
    layout = fcs::MaskKind::line1d;
  else
    throw ConfigError("layout must be point2d or line1d");
  if (kind == "equispaced") layout = fcs::MaskKind::line1d;
  const fcs::SamplingMask m0 = fcs::lowfreq_mask(h, w, layout, lf_extent);
  const int budget = fcs::detail::budget_for_accel(h, w, layout, accel);
  fcs::SamplingMask m;
  if (kind == "lowfreq")
    m = m0;
  else if (kind == "random")
    m = fcs::random_mask(h, w, layout, m0, budget, seed);
  else if (kind == "vd")
    m = fcs::vd_mask(h, w, layout, m0, budget, 1.5, seed);
  else if (kind == "equispaced")
    m = fcs::equispaced_mask(h, w, m0, budget);
  else
    throw ConfigError("mask kind must be one of lowfreq|random|vd|equispaced");
  fcs::write_mask_text(m, out);
  std::cout << "budget " << m.budget() << " -> " << out << "\n";
  return 0;
}

int cmd_phantom(const std::string& kind, int n, const std::string& shape_str, uint64_t seed,
                const std::string& out_dir) {
  const auto [h, w] = parse_shape(shape_str);
  const auto files =
      fcs::generate_phantoms(fcs::phantom_kind_from_string(kind), n, h, w, seed, out_dir);
  std::cout << files.size() << " phantoms -> " << out_dir << "\n";
  return 0;
}

int cmd_verify(const std::string& suite, uint64_t seed) {
  const auto reports = fcs::run_verify(suite, seed);
  fcs::json out = fcs::json::array();
  bool all_pass = true;
  for (const auto& r : reports) {
    out.push_back(r.to_json());
    all_pass = all_pass && r.pass();
  }
  std::cout << out.dump(2) << "\n";
  return all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier compressed-sensing toolkit"};
  app.require_subcommand(1);

  std::string config, out, bank, input, row, kind, shape = "64x64", layout = "point2d",
                                                  suite = "all";
  int accel = 8, n = 1, lf_extent = 8;
  uint64_t seed = 0;

  auto* train = app.add_subcommand("train", "Train a mask/reconstructor pair bank");
  train->add_option("--config", config)->required();
  train->add_option("--out", out)->required();

  auto* infer = app.add_subcommand("infer", "Reconstruct one k-space input with a trained bank");
  infer->add_option("--bank", bank)->required();
  infer->add_option("--input", input)->required();
  infer->add_option("--out", out)->required();
  infer->add_option("--row", row);
  infer->add_option("--seed", seed);

  auto* eval = app.add_subcommand("eval", "Run the evaluation protocol from a config");
  eval->add_option("--config", config)->required();
  eval->add_option("--out", out)->required();

  auto* masks = app.add_subcommand("masks", "Generate a sampling mask");
  masks->add_option("--kind", kind)->required();
  masks->add_option("--accel", accel);
  masks->add_option("--shape", shape);
  masks->add_option("--layout", layout);
  masks->add_option("--lf-extent", lf_extent);
  masks->add_option("--seed", seed);
  masks->add_option("--out", out)->required();

  auto* phantom = app.add_subcommand("phantom", "Generate synthetic phantom images");
  phantom->add_option("--kind", kind)->required();
  phantom->add_option("--n", n);
  phantom->add_option("--shape", shape);
  phantom->add_option("--seed", seed);
  phantom->add_option("--out", out)->required();

  auto* verify = app.add_subcommand("verify", "Run an oracle verification suite");
  verify->add_option("--suite", suite);
  verify->add_option("--seed", seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (train->parsed()) return cmd_train(config, out);
    if (infer->parsed()) return cmd_infer(bank, input, out, row, seed);
    if (eval->parsed()) return cmd_eval(config, out);
    if (masks->parsed()) return cmd_masks(kind, accel, shape, layout, lf_extent, seed, out);
    if (phantom->parsed()) return cmd_phantom(kind, n, shape, seed, out);
    if (verify->parsed()) return cmd_verify(suite, seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

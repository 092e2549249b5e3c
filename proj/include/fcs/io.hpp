#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fcs/grid.hpp"
#include "fcs/mask.hpp"
#include "fcs/pipeline.hpp"
#include "fcs/recon.hpp"
#include "fcs/sampler.hpp"

namespace fcs {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// 16-bit binary PGM (P5), values linearly mapped from [0,1]
// ---------------------------------------------------------------------------

inline void write_pgm16(const ImageGrid& img, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_pgm16: cannot open " + path.string());
  out << "P5\n" << img.width << " " << img.height << "\n65535\n";
  std::vector<uint8_t> buf(img.size() * 2);
  for (size_t i = 0; i < img.size(); ++i) {
    const double clamped = std::clamp(img.pixels[i], 0.0, 1.0);
    const uint16_t v = static_cast<uint16_t>(std::lround(clamped * 65535.0));
    buf[2 * i] = static_cast<uint8_t>(v >> 8);  // PGM samples are big-endian
    buf[2 * i + 1] = static_cast<uint8_t>(v & 0xff);
  }
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

inline ImageGrid read_pgm16(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_pgm16: cannot open " + path.string());
  auto fail = [&](const std::string& what) {
    const auto off = in.tellg();
    std::ostringstream msg;
    msg << "read_pgm16: " << what << " in " << path.string() << " at byte offset "
        << (off < 0 ? -1 : static_cast<long long>(off));
    throw std::runtime_error(msg.str());
  };
  auto next_token = [&]() -> std::string {
    std::string tok;
    char c;
    while (in.get(c)) {
      if (c == '#') {  // comment to end of line
        while (in.get(c) && c != '\n') {
        }
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (!tok.empty()) return tok;
        continue;
      }
      tok += c;
    }
    if (tok.empty()) fail("unexpected end of header");
    return tok;
  };
  if (next_token() != "P5") fail("not a P5 PGM");
  int w = 0, h = 0, maxval = 0;
  try {
    w = std::stoi(next_token());
    h = std::stoi(next_token());
    maxval = std::stoi(next_token());
  } catch (const std::exception&) {
    fail("malformed header field");
  }
  if (w < 1 || h < 1) fail("bad dimensions");
  if (maxval != 65535) fail("expected 16-bit maxval 65535");
  std::vector<uint8_t> buf(static_cast<size_t>(w) * h * 2);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (in.gcount() != static_cast<std::streamsize>(buf.size())) fail("truncated pixel data");
  ImageGrid img(h, w);
  for (size_t i = 0; i < img.size(); ++i) {
    const uint16_t v = static_cast<uint16_t>(buf[2 * i] << 8 | buf[2 * i + 1]);
    img.pixels[i] = v / 65535.0;
  }
  return img;
}

// ---------------------------------------------------------------------------
// KGrid / UncertaintyMap binary: magic, u32 h, u32 w (LE), f32 (re, im) pairs
// ---------------------------------------------------------------------------

namespace detail {

inline void put_u32le(std::vector<uint8_t>& buf, uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

inline void put_f32le(std::vector<uint8_t>& buf, float f) {
  uint32_t v;
  static_assert(sizeof(v) == sizeof(f));
  std::memcpy(&v, &f, 4);
  put_u32le(buf, v);
}

inline uint32_t get_u32le(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | static_cast<uint32_t>(p[1]) << 8 |
         static_cast<uint32_t>(p[2]) << 16 | static_cast<uint32_t>(p[3]) << 24;
}

inline float get_f32le(const uint8_t* p) {
  const uint32_t v = get_u32le(p);
  float f;
  std::memcpy(&f, &v, 4);
  return f;
}

inline std::vector<uint8_t> read_all(const fs::path& path, const char* who) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(std::string(who) + ": cannot open " + path.string());
  std::vector<uint8_t> buf{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return buf;
}

inline void write_all(const fs::path& path, const std::vector<uint8_t>& buf, const char* who) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(std::string(who) + ": cannot open " + path.string());
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

inline std::vector<uint8_t> encode_complex_grid(const char magic[4], int h, int w,
                                                const std::complex<double>* data) {
  std::vector<uint8_t> buf;
  buf.reserve(12 + static_cast<size_t>(h) * w * 8);
  buf.insert(buf.end(), magic, magic + 4);
  put_u32le(buf, static_cast<uint32_t>(h));
  put_u32le(buf, static_cast<uint32_t>(w));
  for (size_t i = 0; i < static_cast<size_t>(h) * w; ++i) {
    put_f32le(buf, static_cast<float>(data[i].real()));
    put_f32le(buf, static_cast<float>(data[i].imag()));
  }
  return buf;
}

inline std::pair<std::pair<int, int>, std::vector<std::complex<double>>> decode_complex_grid(
    const std::vector<uint8_t>& buf, const char magic[4], const char* who) {
  if (buf.size() < 12 || !std::equal(magic, magic + 4, buf.begin()))
    throw std::runtime_error(std::string(who) + ": bad magic");
  const int h = static_cast<int>(get_u32le(buf.data() + 4));
  const int w = static_cast<int>(get_u32le(buf.data() + 8));
  const size_t n = static_cast<size_t>(h) * w;
  if (h < 1 || w < 1 || buf.size() != 12 + n * 8)
    throw std::runtime_error(std::string(who) + ": size mismatch");
  std::vector<std::complex<double>> data(n);
  for (size_t i = 0; i < n; ++i)
    data[i] = {get_f32le(buf.data() + 12 + 8 * i), get_f32le(buf.data() + 16 + 8 * i)};
  return {{h, w}, std::move(data)};
}

}  // namespace detail

inline void write_kgrid(const KGrid& k, const fs::path& path) {
  detail::write_all(path, detail::encode_complex_grid("KGRD", k.height, k.width, k.coeffs.data()),
                    "write_kgrid");
}

inline KGrid read_kgrid(const fs::path& path) {
  auto [shape, data] =
      detail::decode_complex_grid(detail::read_all(path, "read_kgrid"), "KGRD", "read_kgrid");
  KGrid k(shape.first, shape.second);
  k.coeffs = std::move(data);
  return k;
}

inline void write_umap(const RealGrid& v, const fs::path& path) {
  std::vector<std::complex<double>> tmp(v.values.begin(), v.values.end());
  detail::write_all(path, detail::encode_complex_grid("UMAP", v.height, v.width, tmp.data()),
                    "write_umap");
}

inline RealGrid read_umap(const fs::path& path) {
  auto [shape, data] =
      detail::decode_complex_grid(detail::read_all(path, "read_umap"), "UMAP", "read_umap");
  RealGrid v(shape.first, shape.second);
  for (size_t i = 0; i < data.size(); ++i) v.values[i] = data[i].real();
  return v;
}

// ---------------------------------------------------------------------------
// Mask text format
// ---------------------------------------------------------------------------

inline void write_mask_text(const SamplingMask& m, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_mask_text: cannot open " + path.string());
  out << "MASK " << m.height << " " << m.width << " "
      << (m.kind == MaskKind::point2d ? "point2d" : "line1d") << "\n";
  if (m.kind == MaskKind::point2d) {
    const auto cells = m.cell_lookup();
    for (int r = 0; r < m.height; ++r) {
      for (int c = 0; c < m.width; ++c)
        out << (cells[static_cast<size_t>(r) * m.width + c] ? '1' : '0');
      out << "\n";
    }
  } else {
    std::vector<char> line(m.width, '0');
    for (int c : m.acquired) line[c] = '1';
    out.write(line.data(), m.width);
    out << "\n";
  }
}

inline SamplingMask read_mask_text(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_mask_text: cannot open " + path.string());
  std::string tag, kind_str;
  int h = 0, w = 0;
  if (!(in >> tag >> h >> w >> kind_str) || tag != "MASK")
    throw std::runtime_error("read_mask_text: bad header in " + path.string());
  MaskKind kind;
  if (kind_str == "point2d")
    kind = MaskKind::point2d;
  else if (kind_str == "line1d")
    kind = MaskKind::line1d;
  else
    throw std::runtime_error("read_mask_text: unknown kind in " + path.string());
  const int rows = kind == MaskKind::point2d ? h : 1;
  std::vector<int> acquired;
  std::string line;
  for (int r = 0; r < rows; ++r) {
    if (!(in >> line) || static_cast<int>(line.size()) != w)
      throw std::runtime_error("read_mask_text: bad row in " + path.string());
    for (int c = 0; c < w; ++c)
      if (line[c] == '1') acquired.push_back(kind == MaskKind::point2d ? r * w + c : c);
  }
  return make_mask(h, w, kind, std::move(acquired));
}

// ---------------------------------------------------------------------------
// JSON conversions
// ---------------------------------------------------------------------------

inline json to_json(const SamplerSpec& s) {
  return json{{"variant", s.variant == SamplerVariant::gaussian_spectral ? "gaussian_spectral"
                                                                         : "jitter_ensemble"},
              {"alpha", s.alpha},
              {"amplitude", s.amplitude},
              {"temperature", s.temperature},
              {"seed", s.seed}};
}

inline SamplerSpec sampler_from_json(const json& j) {
  SamplerSpec s;
  const std::string variant = j.at("variant").get<std::string>();
  if (variant == "gaussian_spectral")
    s.variant = SamplerVariant::gaussian_spectral;
  else if (variant == "jitter_ensemble")
    s.variant = SamplerVariant::jitter_ensemble;
  else
    throw std::runtime_error("sampler_from_json: unknown variant '" + variant + "'");
  s.alpha = j.value("alpha", 1.0);
  s.amplitude = j.value("amplitude", 1.0);
  s.temperature = j.value("temperature", 1.0);
  s.seed = j.value("seed", static_cast<uint64_t>(0));
  s.validate();
  return s;
}

inline json to_json(const ReconParams& p) {
  return json{{"variant", p.variant == ReconVariant::zero_fill ? "zero_fill" : "fista"},
              {"lambda", p.lambda},
              {"iters", p.iters},
              {"wavelet_levels", p.wavelet_levels}};
}

inline ReconParams recon_from_json(const json& j) {
  ReconParams p;
  const std::string variant = j.at("variant").get<std::string>();
  if (variant == "zero_fill")
    p.variant = ReconVariant::zero_fill;
  else if (variant == "fista")
    p.variant = ReconVariant::fista;
  else
    throw std::runtime_error("recon_from_json: unknown variant '" + variant + "'");
  p.lambda = j.value("lambda", 0.0);
  p.iters = j.value("iters", 100);
  p.wavelet_levels = j.value("wavelet_levels", 3);
  p.validate();
  return p;
}

// ---------------------------------------------------------------------------
// PairBank on disk: manifest.json + m0.txt + mask_<j>.txt + centroid_<j>.umap
// ---------------------------------------------------------------------------

inline void save_pair_bank(const PairBank& bank, const fs::path& dir) {
  bank.validate();
  fs::create_directories(dir);
  write_mask_text(bank.m0, dir / "m0.txt");
  json manifest;
  manifest["J"] = bank.J;
  manifest["m0"] = "m0.txt";
  manifest["sampler"] = to_json(bank.sampler);
  manifest["S"] = bank.S;
  manifest["total_budget"] = bank.total_budget;
  manifest["thetas"] = json::array();
  manifest["masks"] = json::array();
  manifest["centroids"] = json::array();
  manifest["tuned_on_full"] = json::array();
  for (int j = 0; j < bank.J; ++j) {
    const std::string mask_name = "mask_" + std::to_string(j) + ".txt";
    const std::string cent_name = "centroid_" + std::to_string(j) + ".umap";
    write_mask_text(bank.masks[j], dir / mask_name);
    write_umap(bank.centroids[j], dir / cent_name);
    manifest["thetas"].push_back(to_json(bank.thetas[j]));
    manifest["masks"].push_back(mask_name);
    manifest["centroids"].push_back(cent_name);
    manifest["tuned_on_full"].push_back(static_cast<bool>(bank.tuned_on_full[j]));
  }
  std::ofstream out(dir / "manifest.json");
  out << manifest.dump(2) << "\n";
}

inline PairBank load_pair_bank(const fs::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw std::runtime_error("load_pair_bank: cannot open manifest in " + dir.string());
  json manifest = json::parse(in);
  PairBank bank;
  bank.J = manifest.at("J").get<int>();
  bank.m0 = read_mask_text(dir / manifest.at("m0").get<std::string>());
  bank.sampler = sampler_from_json(manifest.at("sampler"));
  bank.S = manifest.at("S").get<int>();
  bank.total_budget = manifest.at("total_budget").get<int>();
  for (int j = 0; j < bank.J; ++j) {
    bank.thetas.push_back(recon_from_json(manifest.at("thetas").at(j)));
    bank.masks.push_back(read_mask_text(dir / manifest.at("masks").at(j).get<std::string>()));
    bank.centroids.push_back(read_umap(dir / manifest.at("centroids").at(j).get<std::string>()));
    bank.tuned_on_full.push_back(manifest.at("tuned_on_full").at(j).get<bool>() ? 1 : 0);
  }
  bank.validate();
  return bank;
}

}  // namespace fcs

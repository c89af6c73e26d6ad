#include "jigsolve/puzzle.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "jigsolve/errors.hpp"

namespace jigsolve {

const char* mean_mode_name(MeanMode m) {
  switch (m) {
    case MeanMode::kPerPatch: return "patch";
    case MeanMode::kGlobal: return "global";
    case MeanMode::kNone: return "none";
  }
  return "?";
}

MeanMode parse_mean_mode(const std::string& s) {
  if (s == "patch") return MeanMode::kPerPatch;
  if (s == "global") return MeanMode::kGlobal;
  if (s == "none") return MeanMode::kNone;
  throw DomainError("unknown mean mode '" + s + "' (expected patch, global or none)");
}

PuzzleInstance make_truth_only_puzzle(const GridShape& shape, Rng& rng) {
  PuzzleInstance p;
  p.shape = shape;
  p.truth = random_permutation(shape.size(), rng);
  p.meta.source = "truth-only";
  return p;
}

PuzzleInstance rearranged(const PuzzleInstance& puzzle, const Configuration& prediction) {
  PuzzleInstance next;
  next.shape = puzzle.shape;
  next.meta = puzzle.meta;
  next.truth = reorganize(puzzle.truth, prediction);
  if (puzzle.has_pixels()) {
    next.patches.resize(puzzle.patches.size());
    for (int s = 0; s < prediction.size(); ++s) next.patches[prediction[s]] = puzzle.patches[s];
  }
  return next;
}

void write_manifest(const std::filesystem::path& path, const Manifest& m) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& [k, v] : m) out << k << '=' << v << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Manifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  Manifest m;
  std::string line;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ParseError("manifest line without '=' in " + path.string(), offset);
      m[line.substr(0, eq)] = line.substr(eq + 1);
    }
    offset += line.size() + 1;
  }
  return m;
}

namespace {

std::string join_ints(const std::vector<int>& v, char sep = ',') {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(v[i]);
  }
  return out;
}

std::vector<int> split_ints(const std::string& s, char sep = ',') {
  std::vector<int> out;
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw FormatError("bad integer list '" + s + "'");
    }
  }
  return out;
}

const std::string& require(const Manifest& m, const std::string& key) {
  const auto it = m.find(key);
  if (it == m.end()) throw FormatError("manifest is missing '" + key + "'");
  return it->second;
}

// Stack equal-sized tiles along the last spatial axis.
ImageTensor stack_tiles(const std::vector<ImageTensor>& tiles) {
  std::vector<int> dims = tiles.front().dims;
  dims.back() *= static_cast<int>(tiles.size());
  ImageTensor out(dims, tiles.front().channels);
  std::size_t pos = 0;
  for (const auto& t : tiles) {
    std::copy(t.pixels.begin(), t.pixels.end(), out.pixels.begin() + static_cast<std::ptrdiff_t>(pos));
    pos += t.pixels.size();
  }
  return out;
}

std::vector<ImageTensor> unstack_tiles(const ImageTensor& stacked, const std::vector<int>& tile_dims, int n) {
  if (stacked.rank() != tile_dims.size() || stacked.dims.back() != tile_dims.back() * n) {
    throw FormatError("patch stack does not match manifest tile dims");
  }
  std::vector<ImageTensor> tiles;
  std::size_t pos = 0;
  for (int i = 0; i < n; ++i) {
    ImageTensor t(tile_dims, stacked.channels);
    std::copy_n(stacked.pixels.begin() + static_cast<std::ptrdiff_t>(pos), t.pixels.size(), t.pixels.begin());
    pos += t.pixels.size();
    tiles.push_back(std::move(t));
  }
  return tiles;
}

}  // namespace

Manifest puzzle_manifest(const PuzzleInstance& puzzle) {
  Manifest m;
  m["format"] = "jigsolve-puzzle-1";
  m["grid"] = puzzle.shape.to_string();
  m["truth"] = join_ints({puzzle.truth.values().begin(), puzzle.truth.values().end()});
  m["source"] = puzzle.meta.source;
  m["seed"] = std::to_string(puzzle.meta.seed);
  m["cell"] = std::to_string(puzzle.meta.cell);
  m["crop"] = std::to_string(puzzle.meta.crop);
  m["region_origin"] = join_ints({puzzle.meta.region_origin.begin(), puzzle.meta.region_origin.end()});
  std::string offsets;
  for (std::size_t i = 0; i < puzzle.meta.offsets.size(); ++i) {
    if (i) offsets += ';';
    const auto& o = puzzle.meta.offsets[i];
    offsets += join_ints({o.begin(), o.end()});
  }
  m["offsets"] = offsets;
  m["mirrored"] = join_ints({puzzle.meta.mirrored.begin(), puzzle.meta.mirrored.end()});
  m["mean_mode"] = mean_mode_name(puzzle.meta.mean_mode);
  if (puzzle.has_pixels()) {
    m["tile"] = join_ints(puzzle.patches.front().dims, 'x');
    m["channels"] = std::to_string(puzzle.patches.front().channels);
  }
  return m;
}

void save_puzzle(const PuzzleInstance& puzzle, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_manifest(dir / "manifest.txt", puzzle_manifest(puzzle));
  if (puzzle.has_pixels()) save_rten(stack_tiles(puzzle.patches), dir / "patches.rten");
}

PuzzleInstance load_puzzle(const std::filesystem::path& dir, bool with_pixels) {
  const Manifest m = read_manifest(dir / "manifest.txt");
  if (require(m, "format") != "jigsolve-puzzle-1") throw FormatError("unknown puzzle format in " + dir.string());
  PuzzleInstance p;
  try {
    p.shape = GridShape::parse(require(m, "grid"));
    p.truth = Configuration(split_ints(require(m, "truth")));
  } catch (const DomainError& e) {
    throw FormatError(dir.string() + ": " + e.what());
  }
  if (p.truth.size() != p.shape.size()) throw FormatError("truth length does not match grid in " + dir.string());
  p.meta.source = require(m, "source");
  p.meta.seed = std::stoull(require(m, "seed"));
  p.meta.cell = std::stoi(require(m, "cell"));
  p.meta.crop = std::stoi(require(m, "crop"));
  const auto origin = split_ints(require(m, "region_origin"));
  if (origin.size() != 3) throw FormatError("region_origin needs 3 values");
  std::copy(origin.begin(), origin.end(), p.meta.region_origin.begin());
  const std::string& offsets = require(m, "offsets");
  if (!offsets.empty()) {
    std::stringstream ss(offsets);
    std::string item;
    while (std::getline(ss, item, ';')) {
      const auto o = split_ints(item);
      if (o.size() != 3) throw FormatError("offset entries need 3 values");
      p.meta.offsets.push_back({o[0], o[1], o[2]});
    }
  }
  for (int f : split_ints(require(m, "mirrored"))) p.meta.mirrored.push_back(static_cast<std::uint8_t>(f));
  p.meta.mean_mode = parse_mean_mode(require(m, "mean_mode"));
  if (with_pixels && m.count("tile")) {
    const auto tile = split_ints(require(m, "tile"), 'x');
    p.patches = unstack_tiles(load_image(dir / "patches.rten"), tile, p.shape.size());
  }
  return p;
}

std::filesystem::path instance_dir(const std::filesystem::path& corpus, std::size_t index) {
  char name[32];
  std::snprintf(name, sizeof name, "%06zu", index);
  return corpus / name;
}

std::vector<std::filesystem::path> list_instances(const std::filesystem::path& corpus) {
  if (!std::filesystem::is_directory(corpus)) throw std::runtime_error("corpus not found: " + corpus.string());
  std::vector<std::filesystem::path> dirs;
  for (const auto& entry : std::filesystem::directory_iterator(corpus)) {
    if (entry.is_directory() && std::filesystem::exists(entry.path() / "manifest.txt")) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

}  // namespace jigsolve

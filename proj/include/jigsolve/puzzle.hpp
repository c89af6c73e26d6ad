#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "jigsolve/grid.hpp"
#include "jigsolve/image.hpp"

namespace jigsolve {

enum class MeanMode {
  kPerPatch,  // subtract each patch's own per-channel mean
  kGlobal,    // subtract the resized image's per-channel mean
  kNone,
};

const char* mean_mode_name(MeanMode m);
MeanMode parse_mean_mode(const std::string& s);

// Everything needed to rebuild an instance bit-exactly from its source.
struct PuzzleMeta {
  std::string source;         // e.g. "synth:mixed:256:17" or an image path
  std::uint64_t seed = 0;     // stream the layout was drawn from
  int cell = 0;               // cell edge length after resize
  int crop = 0;               // patch edge length
  std::array<int, 3> region_origin{};          // 3D: corner of the cropped region
  std::vector<std::array<int, 3>> offsets;     // per original cell: crop offset in its cell
  std::vector<std::uint8_t> mirrored;          // per original cell: horizontally flipped
  MeanMode mean_mode = MeanMode::kPerPatch;
};

// A scrambled puzzle. patches[s] is the tile currently in slot s and
// truth[s] its original position. `patches` may be empty for truth-only
// puzzles, which only oracle scorers can handle.
struct PuzzleInstance {
  GridShape shape;
  std::vector<ImageTensor> patches;
  Configuration truth;
  PuzzleMeta meta;

  bool has_pixels() const { return !patches.empty(); }
};

// Truth-only puzzle scrambled by a uniform permutation.
PuzzleInstance make_truth_only_puzzle(const GridShape& shape, Rng& rng);

// The puzzle after physically moving the patch in slot s to slot
// prediction[s]; truth is updated with reorganize().
PuzzleInstance rearranged(const PuzzleInstance& puzzle, const Configuration& prediction);

// key=value manifest records.
using Manifest = std::map<std::string, std::string>;
void write_manifest(const std::filesystem::path& path, const Manifest& m);
Manifest read_manifest(const std::filesystem::path& path);

Manifest puzzle_manifest(const PuzzleInstance& puzzle);

// One directory per instance: manifest.txt plus patches.rten (tiles stacked
// along an extra trailing axis).
void save_puzzle(const PuzzleInstance& puzzle, const std::filesystem::path& dir);
PuzzleInstance load_puzzle(const std::filesystem::path& dir, bool with_pixels = true);

std::filesystem::path instance_dir(const std::filesystem::path& corpus, std::size_t index);
std::vector<std::filesystem::path> list_instances(const std::filesystem::path& corpus);

}  // namespace jigsolve

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jigsolve/image.hpp"
#include "jigsolve/puzzle.hpp"

namespace jigsolve {

// Separable (bi/tri)linear resampling with half-pixel centers and edge
// clamping. Works on 2D and 3D tensors; new_dims must match the rank.
ImageTensor resize_bilinear(const ImageTensor& img, const std::vector<int>& new_dims);

enum class SynthKind { kGradient, kBlobs, kMixed };

SynthKind parse_synth_kind(const std::string& s);  // "gradient", "blobs", "mixed"
const char* synth_kind_name(SynthKind k);

// Deterministic single-channel size x size test image:
//   gradient  a*x/W + b*y/H + c with a, b, c drawn per image
//   blobs     3-6 Gaussian bumps
//   mixed     average of the two
// Values are clamped to [0,1].
ImageTensor synth_image(SynthKind kind, int size, std::uint64_t seed);
ImageTensor synth_gradient(int width, int height, double a, double b, double c);

// size^3 single-channel counterpart of synth_image.
ImageTensor synth_volume(SynthKind kind, int size, std::uint64_t seed);

struct PuzzleOptions {
  int cell = 85;
  int crop = 64;
  bool jitter = true;
  double mirror_p = 0.5;
  MeanMode mean_mode = MeanMode::kPerPatch;
  bool scramble = true;
  std::string source;  // recorded in meta
};

// Resizes to (cell*W) x (cell*H), crops one patch per cell, mirrors, removes
// the mean and scrambles. All randomness comes from `seed`, drawn in this
// order: per original cell (row-major) the x and y offsets (when jittering)
// and the mirror flag (when mirror_p > 0); then the scrambling permutation.
PuzzleInstance make_puzzle_2d(const ImageTensor& img, int grid_w, int grid_h, std::uint64_t seed,
                              const PuzzleOptions& opts = {});

struct Puzzle3dOptions {
  int region = 120;
  int crop = 0;  // 0: 48 for 2 pieces per axis, 32 for 3
  bool jitter = true;
  MeanMode mean_mode = MeanMode::kPerPatch;
  bool scramble = true;
  std::string source;
};

// Random region^3 crop cut into per_axis^3 cells with one jittered sub-volume
// per cell; no mirroring.
PuzzleInstance make_puzzle_3d(const ImageTensor& vol, int per_axis, std::uint64_t seed,
                              const Puzzle3dOptions& opts = {});

// Rebuilds the tiles from an already resized 2D image (or a 3D volume) using
// the layout recorded in meta, without drawing any random numbers.
PuzzleInstance build_puzzle(const ImageTensor& prepared, const GridShape& shape, const PuzzleMeta& meta,
                            const Configuration& truth);

// The image make_puzzle_2d crops from: img resized to (cell*W) x (cell*H).
ImageTensor prepare_image_2d(const ImageTensor& img, int grid_w, int grid_h, int cell);

}  // namespace jigsolve

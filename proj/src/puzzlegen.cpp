#include "jigsolve/puzzlegen.hpp"

#include <algorithm>
#include <cmath>

#include "jigsolve/errors.hpp"
#include "jigsolve/rng.hpp"

namespace jigsolve {

namespace {

// Resamples one axis; `axis` 0 is x.
ImageTensor resize_axis(const ImageTensor& src, std::size_t axis, int new_len) {
  const int old_len = src.dims[axis];
  if (old_len == new_len) return src;
  std::vector<int> dims = src.dims;
  dims[axis] = new_len;
  ImageTensor dst(dims, src.channels);

  // stride of one step along `axis`, in floats
  std::size_t stride = static_cast<std::size_t>(src.channels);
  for (std::size_t a = 0; a < axis; ++a) stride *= static_cast<std::size_t>(src.dims[a]);
  const std::size_t inner = stride;
  std::size_t outer = 1;
  for (std::size_t a = axis + 1; a < src.rank(); ++a) outer *= static_cast<std::size_t>(src.dims[a]);

  const double scale = static_cast<double>(old_len) / new_len;
  for (int i = 0; i < new_len; ++i) {
    const double pos = std::clamp((i + 0.5) * scale - 0.5, 0.0, static_cast<double>(old_len - 1));
    const int i0 = static_cast<int>(std::floor(pos));
    const int i1 = std::min(i0 + 1, old_len - 1);
    const double t = pos - i0;
    for (std::size_t o = 0; o < outer; ++o) {
      const float* a = &src.pixels[(o * old_len + i0) * inner];
      const float* b = &src.pixels[(o * old_len + i1) * inner];
      float* out = &dst.pixels[(o * new_len + i) * inner];
      for (std::size_t k = 0; k < inner; ++k) out[k] = static_cast<float>((1.0 - t) * a[k] + t * b[k]);
    }
  }
  return dst;
}

float clamp01(double v) { return static_cast<float>(std::clamp(v, 0.0, 1.0)); }

struct Bump {
  double cx, cy, cz, sigma, amp;
};

std::vector<Bump> draw_bumps(Rng& rng, int size, bool volume) {
  const int count = rng.uniform_int(3, 6);
  std::vector<Bump> bumps;
  for (int i = 0; i < count; ++i) {
    Bump b;
    b.cx = rng.uniform(0.0, size);
    b.cy = rng.uniform(0.0, size);
    b.cz = volume ? rng.uniform(0.0, size) : 0.0;
    b.sigma = rng.uniform(0.08, 0.25) * size;
    b.amp = rng.uniform(0.2, 0.5);
    bumps.push_back(b);
  }
  return bumps;
}

double bump_sum(const std::vector<Bump>& bumps, double x, double y, double z) {
  double v = 0.0;
  for (const auto& b : bumps) {
    const double d2 = (x - b.cx) * (x - b.cx) + (y - b.cy) * (y - b.cy) + (z - b.cz) * (z - b.cz);
    v += b.amp * std::exp(-d2 / (2.0 * b.sigma * b.sigma));
  }
  return v;
}

struct GradientParams {
  double a, b, c, d;
};

GradientParams draw_gradient(Rng& rng) {
  GradientParams g;
  g.a = rng.uniform(0.3, 0.6);
  g.b = rng.uniform(0.3, 0.6);
  g.d = rng.uniform(0.3, 0.6);  // z slope, volumes only
  g.c = rng.uniform(0.0, 0.1);
  return g;
}

ImageTensor synth(SynthKind kind, int size, std::uint64_t seed, bool volume) {
  if (size < 16) throw DomainError("synthetic images need size >= 16");
  Rng rng(seed);
  const GradientParams g = draw_gradient(rng);
  const std::vector<Bump> bumps = draw_bumps(rng, size, volume);
  std::vector<int> dims = volume ? std::vector<int>{size, size, size} : std::vector<int>{size, size};
  ImageTensor img(dims, 1);
  const int depth = volume ? size : 1;
  const double z_weight = volume ? 1.0 : 0.0;
  for (int z = 0; z < depth; ++z) {
    for (int y = 0; y < size; ++y) {
      for (int x = 0; x < size; ++x) {
        const double grad = g.a * x / size + g.b * y / size + z_weight * g.d * z / size + g.c;
        const double blob = bump_sum(bumps, x + 0.5, y + 0.5, z + 0.5);
        double v = 0.0;
        switch (kind) {
          case SynthKind::kGradient: v = grad; break;
          case SynthKind::kBlobs: v = blob; break;
          case SynthKind::kMixed: v = 0.5 * (std::clamp(grad, 0.0, 1.0) + std::clamp(blob, 0.0, 1.0)); break;
        }
        img.at(x, y, z, 0) = clamp01(v);
      }
    }
  }
  return img;
}

std::vector<double> channel_means(const ImageTensor& img) {
  std::vector<double> mean(img.channels, 0.0);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) mean[i % img.channels] += img.pixels[i];
  for (double& m : mean) m /= static_cast<double>(img.voxel_count());
  return mean;
}

void subtract(ImageTensor& img, const std::vector<double>& mean) {
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    img.pixels[i] = static_cast<float>(img.pixels[i] - mean[i % img.channels]);
  }
}

ImageTensor crop_tile(const ImageTensor& src, const std::array<int, 3>& origin, int edge, bool flip) {
  const bool volume = src.rank() == 3;
  std::vector<int> dims = volume ? std::vector<int>{edge, edge, edge} : std::vector<int>{edge, edge};
  ImageTensor tile(dims, src.channels);
  const int depth = volume ? edge : 1;
  for (int z = 0; z < depth; ++z) {
    for (int y = 0; y < edge; ++y) {
      for (int x = 0; x < edge; ++x) {
        const int sx = origin[0] + (flip ? edge - 1 - x : x);
        for (int c = 0; c < src.channels; ++c) {
          tile.at(x, y, z, c) = src.at(sx, origin[1] + y, volume ? origin[2] + z : 0, c);
        }
      }
    }
  }
  return tile;
}

}  // namespace

ImageTensor resize_bilinear(const ImageTensor& img, const std::vector<int>& new_dims) {
  if (new_dims.size() != img.rank()) throw DomainError("resize: rank mismatch");
  for (int d : new_dims) {
    if (d < 1) throw DomainError("resize: target dims must be positive");
  }
  ImageTensor out = img;
  for (std::size_t axis = 0; axis < img.rank(); ++axis) out = resize_axis(out, axis, new_dims[axis]);
  return out;
}

SynthKind parse_synth_kind(const std::string& s) {
  if (s == "gradient") return SynthKind::kGradient;
  if (s == "blobs") return SynthKind::kBlobs;
  if (s == "mixed") return SynthKind::kMixed;
  throw DomainError("unknown synthetic kind '" + s + "'");
}

const char* synth_kind_name(SynthKind k) {
  switch (k) {
    case SynthKind::kGradient: return "gradient";
    case SynthKind::kBlobs: return "blobs";
    case SynthKind::kMixed: return "mixed";
  }
  return "?";
}

ImageTensor synth_image(SynthKind kind, int size, std::uint64_t seed) { return synth(kind, size, seed, false); }

ImageTensor synth_volume(SynthKind kind, int size, std::uint64_t seed) { return synth(kind, size, seed, true); }

ImageTensor synth_gradient(int width, int height, double a, double b, double c) {
  ImageTensor img({width, height}, 1);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      img.at(x, y, 0) = clamp01(a * x / width + b * y / height + c);
    }
  }
  return img;
}

ImageTensor prepare_image_2d(const ImageTensor& img, int grid_w, int grid_h, int cell) {
  if (img.rank() != 2) throw DomainError("2D puzzles need a 2D image");
  return resize_bilinear(img, {cell * grid_w, cell * grid_h});
}

PuzzleInstance build_puzzle(const ImageTensor& prepared, const GridShape& shape, const PuzzleMeta& meta,
                            const Configuration& truth) {
  const int n = shape.size();
  if (truth.size() != n) throw DomainError("truth does not match grid");
  if (meta.offsets.size() != static_cast<std::size_t>(n) || meta.mirrored.size() != static_cast<std::size_t>(n)) {
    throw DomainError("meta layout does not match grid");
  }
  if (prepared.rank() != shape.rank()) throw DomainError("image rank does not match grid");

  std::vector<double> global_mean;
  if (meta.mean_mode == MeanMode::kGlobal) global_mean = channel_means(prepared);

  std::vector<ImageTensor> tiles;
  tiles.reserve(n);
  for (int id = 0; id < n; ++id) {
    const auto cell_pos = id_to_position(id, shape);
    std::array<int, 3> origin{};
    for (std::size_t axis = 0; axis < shape.rank(); ++axis) {
      origin[axis] = meta.region_origin[axis] + cell_pos[axis] * meta.cell + meta.offsets[id][axis];
      if (meta.offsets[id][axis] < 0 || meta.offsets[id][axis] + meta.crop > meta.cell ||
          origin[axis] + meta.crop > prepared.dims[axis]) {
        throw DomainError("crop window leaves its cell");
      }
    }
    ImageTensor tile = crop_tile(prepared, origin, meta.crop, meta.mirrored[id] != 0);
    if (meta.mean_mode == MeanMode::kPerPatch) subtract(tile, channel_means(tile));
    if (meta.mean_mode == MeanMode::kGlobal) subtract(tile, global_mean);
    tiles.push_back(std::move(tile));
  }

  PuzzleInstance p;
  p.shape = shape;
  p.truth = truth;
  p.meta = meta;
  p.patches.resize(n);
  for (int s = 0; s < n; ++s) p.patches[s] = tiles[truth[s]];
  return p;
}

PuzzleInstance make_puzzle_2d(const ImageTensor& img, int grid_w, int grid_h, std::uint64_t seed,
                              const PuzzleOptions& opts) {
  if (opts.crop < 1 || opts.crop > opts.cell) throw DomainError("crop must be in [1, cell]");
  if (opts.mirror_p < 0.0 || opts.mirror_p > 1.0) throw DomainError("mirror_p must be in [0,1]");
  const GridShape shape({grid_w, grid_h});
  const int n = shape.size();
  Rng rng(seed);

  PuzzleMeta meta;
  meta.source = opts.source;
  meta.seed = seed;
  meta.cell = opts.cell;
  meta.crop = opts.crop;
  meta.mean_mode = opts.mean_mode;
  const int gap = opts.cell - opts.crop;
  for (int id = 0; id < n; ++id) {
    std::array<int, 3> off{gap / 2, gap / 2, 0};
    if (opts.jitter) {
      off[0] = rng.uniform_int(0, gap);
      off[1] = rng.uniform_int(0, gap);
    }
    meta.offsets.push_back(off);
    meta.mirrored.push_back(opts.mirror_p > 0.0 && rng.bernoulli(opts.mirror_p));
  }
  const Configuration truth = opts.scramble ? random_permutation(n, rng) : Configuration::identity(n);
  return build_puzzle(prepare_image_2d(img, grid_w, grid_h, opts.cell), shape, meta, truth);
}

PuzzleInstance make_puzzle_3d(const ImageTensor& vol, int per_axis, std::uint64_t seed,
                              const Puzzle3dOptions& opts) {
  if (per_axis != 2 && per_axis != 3) throw DomainError("3D puzzles use 2 or 3 pieces per axis");
  if (vol.rank() != 3) throw DomainError("3D puzzles need a volume");
  for (int d : vol.dims) {
    if (d < opts.region) throw DomainError("volume smaller than the " + std::to_string(opts.region) + "^3 region");
  }
  const int cell = opts.region / per_axis;
  const int crop = opts.crop > 0 ? opts.crop : (per_axis == 2 ? 48 : 32);
  if (crop > cell) throw DomainError("crop must not exceed the cell");
  const GridShape shape({per_axis, per_axis, per_axis});
  const int n = shape.size();
  Rng rng(seed);

  PuzzleMeta meta;
  meta.source = opts.source;
  meta.seed = seed;
  meta.cell = cell;
  meta.crop = crop;
  meta.mean_mode = opts.mean_mode;
  for (int axis = 0; axis < 3; ++axis) meta.region_origin[axis] = rng.uniform_int(0, vol.dims[axis] - opts.region);
  const int gap = cell - crop;
  for (int id = 0; id < n; ++id) {
    std::array<int, 3> off{gap / 2, gap / 2, gap / 2};
    if (opts.jitter) {
      for (int& o : off) o = rng.uniform_int(0, gap);
    }
    meta.offsets.push_back(off);
    meta.mirrored.push_back(0);
  }
  const Configuration truth = opts.scramble ? random_permutation(n, rng) : Configuration::identity(n);
  return build_puzzle(vol, shape, meta, truth);
}

}  // namespace jigsolve

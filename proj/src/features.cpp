#include "jigsolve/features.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "jigsolve/errors.hpp"

namespace jigsolve {

namespace {

constexpr int kStrip = 2;

// Half-open [begin, end) of block `i` out of `blocks` along a length; never empty.
std::pair<int, int> block_range(int length, int blocks, int i) {
  const int begin = std::min(i * length / blocks, length - 1);
  const int end = std::max((i + 1) * length / blocks, begin + 1);
  return {begin, end};
}

// Mean of channel c over the box [lo, hi) on each axis.
double box_mean(const ImageTensor& t, int c, const std::array<int, 3>& lo, const std::array<int, 3>& hi) {
  double sum = 0.0;
  for (int z = lo[2]; z < hi[2]; ++z) {
    for (int y = lo[1]; y < hi[1]; ++y) {
      for (int x = lo[0]; x < hi[0]; ++x) sum += t.at(x, y, z, c);
    }
  }
  const double count = static_cast<double>(hi[0] - lo[0]) * (hi[1] - lo[1]) * (hi[2] - lo[2]);
  return sum / count;
}

double box_gray_mean(const ImageTensor& t, const std::array<int, 3>& lo, const std::array<int, 3>& hi) {
  double sum = 0.0;
  for (int c = 0; c < t.channels; ++c) sum += box_mean(t, c, lo, hi);
  return sum / t.channels;
}

}  // namespace

int feature_dim(FeatureRecipe recipe, int channels) {
  return recipe == FeatureRecipe::k2d ? 6 * channels + 16 : 8 * channels + 8;
}

FeatureRecipe recipe_for(const ImageTensor& patch) {
  return patch.rank() == 3 ? FeatureRecipe::k3d : FeatureRecipe::k2d;
}

std::vector<double> extract_features(const ImageTensor& patch) {
  if (patch.empty() || patch.voxel_count() == 0) throw DomainError("cannot extract features from an empty patch");
  for (float v : patch.pixels) {
    if (!std::isfinite(v)) throw DomainError("patch contains non-finite values");
  }
  const int C = patch.channels;
  const bool volume = patch.rank() == 3;
  const int w = patch.width(), h = patch.height(), d = patch.depth();
  const std::array<int, 3> full{w, h, d};
  std::vector<double> f;
  f.reserve(feature_dim(recipe_for(patch), C));

  std::vector<double> mean(C, 0.0), var(C, 0.0);
  for (std::size_t i = 0; i < patch.pixels.size(); ++i) mean[i % C] += patch.pixels[i];
  for (double& m : mean) m /= static_cast<double>(patch.voxel_count());
  for (std::size_t i = 0; i < patch.pixels.size(); ++i) {
    const double dv = patch.pixels[i] - mean[i % C];
    var[i % C] += dv * dv;
  }
  for (int c = 0; c < C; ++c) f.push_back(mean[c]);
  for (int c = 0; c < C; ++c) f.push_back(std::sqrt(var[c] / static_cast<double>(patch.voxel_count())));

  const int sw = std::min(kStrip, w), sh = std::min(kStrip, h), sd = std::min(kStrip, d);
  for (int c = 0; c < C; ++c) {
    if (!volume) {
      f.push_back(box_mean(patch, c, {0, 0, 0}, {w, sh, 1}));      // top
      f.push_back(box_mean(patch, c, {0, h - sh, 0}, {w, h, 1}));  // bottom
      f.push_back(box_mean(patch, c, {0, 0, 0}, {sw, h, 1}));      // left
      f.push_back(box_mean(patch, c, {w - sw, 0, 0}, {w, h, 1}));  // right
    } else {
      f.push_back(box_mean(patch, c, {0, 0, 0}, {sw, h, d}));
      f.push_back(box_mean(patch, c, {w - sw, 0, 0}, full));
      f.push_back(box_mean(patch, c, {0, 0, 0}, {w, sh, d}));
      f.push_back(box_mean(patch, c, {0, h - sh, 0}, full));
      f.push_back(box_mean(patch, c, {0, 0, 0}, {w, h, sd}));
      f.push_back(box_mean(patch, c, {0, 0, d - sd}, full));
    }
  }

  if (!volume) {
    for (int by = 0; by < 4; ++by) {
      const auto [y0, y1] = block_range(h, 4, by);
      for (int bx = 0; bx < 4; ++bx) {
        const auto [x0, x1] = block_range(w, 4, bx);
        f.push_back(box_gray_mean(patch, {x0, y0, 0}, {x1, y1, 1}));
      }
    }
  } else {
    for (int bz = 0; bz < 2; ++bz) {
      const auto [z0, z1] = block_range(d, 2, bz);
      for (int by = 0; by < 2; ++by) {
        const auto [y0, y1] = block_range(h, 2, by);
        for (int bx = 0; bx < 2; ++bx) {
          const auto [x0, x1] = block_range(w, 2, bx);
          f.push_back(box_gray_mean(patch, {x0, y0, z0}, {x1, y1, z1}));
        }
      }
    }
  }
  return f;
}

Matrix feature_set(const std::vector<ImageTensor>& patches) {
  if (patches.empty()) throw DomainError("feature_set needs at least one patch");
  Matrix out;
  for (std::size_t s = 0; s < patches.size(); ++s) {
    const auto f = extract_features(patches[s]);
    if (s == 0) out = Matrix(patches.size(), f.size());
    if (f.size() != out.cols()) throw DomainError("patches yield different feature dimensions");
    std::copy(f.begin(), f.end(), out.row(s).begin());
  }
  return out;
}

}  // namespace jigsolve

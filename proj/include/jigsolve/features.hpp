#pragma once

#include <vector>

#include "jigsolve/image.hpp"
#include "jigsolve/matrix.hpp"

namespace jigsolve {

// Feature recipe ids stored in model files.
enum class FeatureRecipe : int {
  k2d = 1,  // d = 6C + 16
  k3d = 2,  // d = 8C + 8
};

int feature_dim(FeatureRecipe recipe, int channels);
FeatureRecipe recipe_for(const ImageTensor& patch);

// Hand-crafted patch descriptor.
//
// 2D layout, C channels:
//   [0, C)      per-channel mean
//   [C, 2C)     per-channel standard deviation
//   [2C, 6C)    per channel: top, bottom, left, right strip means (2 px wide)
//   [6C, 6C+16) 4x4 average-pooled grayscale (channel mean), row-major
// 3D layout:
//   [0, 2C)     per-channel mean, then std
//   [2C, 8C)    per channel: x-min, x-max, y-min, y-max, z-min, z-max slab means
//   [8C, 8C+8)  2x2x2 average-pooled grayscale, x fastest
std::vector<double> extract_features(const ImageTensor& patch);

// Row s holds the features of the patch in slot s.
Matrix feature_set(const std::vector<ImageTensor>& patches);

}  // namespace jigsolve

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "jigsolve/features.hpp"
#include "jigsolve/grid.hpp"
#include "jigsolve/matrix.hpp"
#include "jigsolve/rng.hpp"
#include "jigsolve/search.hpp"

namespace jigsolve {

// Noisy stand-in for a trained model. Each unary row s gets a label that is
// truth[s], except with probability `unary_noise` a uniformly drawn id; the
// row is then (1 - e) * onehot(label) + e / n. Binary pairs follow the same
// scheme over the nine relation classes with `binary_noise`. e = 0 gives the
// exact one-hot tables and e = 1 uniform ones. 3D grids get no binary table.
Scores oracle_score(const Configuration& truth, double unary_noise, double binary_noise, Rng& rng,
                    const GridShape& shape);

class OracleScorer : public ScoreProvider {
 public:
  OracleScorer(double unary_noise, double binary_noise, std::uint64_t seed);
  OracleScorer(double noise, std::uint64_t seed) : OracleScorer(noise, noise, seed) {}

  Scores score(const PuzzleInstance& arranged) override;

 private:
  double unary_noise_;
  double binary_noise_;
  Rng rng_;
};

// Linear heads over a FeatureSet F (n rows of d features):
//   unary:  n*n logits = Wu * flatten(F) + bu, softmax per row
//   binary: 9 logits   = Wb * (F[p] ++ F[q]) + bb, softmax, for each p != q
// Parameters live in one flat vector in the order Wu, bu, Wb, bb (row-major).
// On 3D grids the binary head is carried but not used.
class LinearScorer {
 public:
  LinearScorer() = default;
  LinearScorer(GridShape shape, int feature_dim, FeatureRecipe recipe);

  const GridShape& shape() const { return shape_; }
  int cells() const { return shape_.size(); }
  int feature_dim() const { return d_; }
  FeatureRecipe recipe() const { return recipe_; }
  bool uses_binary() const { return shape_.is_2d(); }

  std::size_t unary_param_count() const { return unary_w_size() + unary_b_size(); }
  std::size_t binary_param_count() const { return binary_w_size() + binary_b_size(); }
  std::size_t param_count() const { return params_.size(); }

  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }

  std::span<const double> unary_weights() const { return {params_.data(), unary_w_size()}; }
  std::span<const double> unary_bias() const { return {params_.data() + unary_w_size(), unary_b_size()}; }
  std::span<const double> binary_weights() const {
    return {params_.data() + unary_param_count(), binary_w_size()};
  }
  std::span<const double> binary_bias() const {
    return {params_.data() + unary_param_count() + binary_w_size(), binary_b_size()};
  }

  std::size_t unary_w_size() const { return static_cast<std::size_t>(cells()) * cells() * cells() * d_; }
  std::size_t unary_b_size() const { return static_cast<std::size_t>(cells()) * cells(); }
  std::size_t binary_w_size() const { return static_cast<std::size_t>(kNumRelClasses) * 2 * d_; }
  std::size_t binary_b_size() const { return kNumRelClasses; }

 private:
  GridShape shape_;
  int d_ = 0;
  FeatureRecipe recipe_ = FeatureRecipe::k2d;
  std::vector<double> params_;
};

Scores linear_score(const LinearScorer& model, const Matrix& features);

struct LossGrad {
  double loss = 0.0;
  double unary_loss = 0.0;
  double binary_loss = 0.0;
  std::vector<double> grad;  // same layout as LinearScorer::params()
};

// Mean unary cross-entropy over slots plus mean binary cross-entropy over
// ordered pairs, with exact gradients.
LossGrad loss_and_grad(const LinearScorer& model, const Matrix& features, const Configuration& truth);

// "JSW1" model file: magic, u32 version, u32 rank, rank x u32 extents, u32 d,
// u32 recipe, then Wu, bu, Wb, bb as little-endian float32.
std::vector<unsigned char> encode_model(const LinearScorer& model);
LinearScorer decode_model(const std::vector<unsigned char>& bytes);
void save_model(const LinearScorer& model, const std::filesystem::path& path);
LinearScorer load_model(const std::filesystem::path& path);

// Scores an arrangement by extracting features from its patches.
class LinearProvider : public ScoreProvider {
 public:
  explicit LinearProvider(const LinearScorer& model) : model_(model) {}
  Scores score(const PuzzleInstance& arranged) override;

 private:
  const LinearScorer& model_;
};

}  // namespace jigsolve

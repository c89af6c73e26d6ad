#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "jigsolve/puzzle.hpp"
#include "jigsolve/scorer.hpp"
#include "jigsolve/search.hpp"

namespace jigsolve {

struct TrainOptions {
  double learning_rate = 0.01;
  int batch_size = 32;
  int epochs = 10;
  int train_rounds = 5;
  std::uint64_t seed = 1;
  double weight_init_scale = 0.01;
  SolverOptions solver;  // used for the in-loop predictions

  void validate() const;
};

struct EpochStats {
  int epoch = 0;
  double mean_loss = 0.0;    // mean over samples of the round-averaged loss
  double mean_rounds = 0.0;  // rounds used per sample
  double solved_fraction = 0.0;  // samples whose loop ended in the solved arrangement
};

// Weights drawn uniformly from [-scale, scale], stored as float32 values.
LinearScorer init_model(const GridShape& shape, int feature_dim, FeatureRecipe recipe, double scale,
                        std::uint64_t seed);

// Mini-batch SGD on the cross-entropy loss with iterative augmentation: each
// sample runs up to train_rounds of score -> predict -> rearrange, the
// per-round losses and gradients are averaged, and one step is taken per
// mini-batch with the mean of the samples' gradients. The loop for a sample
// stops early once the prediction is the identity. Weights are kept
// representable as float32 so a saved model scores identically.
LinearScorer train_sgd(const std::vector<PuzzleInstance>& corpus, const TrainOptions& opts,
                       const std::function<void(const EpochStats&)>& on_epoch = {});

// Same, starting from an existing model.
void train_sgd(LinearScorer& model, const std::vector<PuzzleInstance>& corpus, const TrainOptions& opts,
               const std::function<void(const EpochStats&)>& on_epoch = {});

// Fraction of puzzles solved exactly by solve_iterative with the model.
double exact_recovery_rate(const LinearScorer& model, const std::vector<PuzzleInstance>& puzzles,
                           const SolverOptions& opts);

}  // namespace jigsolve

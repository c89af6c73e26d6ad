#include "jigsolve/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "jigsolve/errors.hpp"

namespace jigsolve {

void TrainOptions::validate() const {
  if (!(learning_rate > 0.0)) throw DomainError("learning_rate must be > 0");
  if (batch_size < 1) throw DomainError("batch_size must be >= 1");
  if (epochs < 1) throw DomainError("epochs must be >= 1");
  if (train_rounds < 1) throw DomainError("train_rounds must be >= 1");
  if (!(weight_init_scale > 0.0)) throw DomainError("weight_init_scale must be > 0");
  solver.validate();
}

LinearScorer init_model(const GridShape& shape, int feature_dim, FeatureRecipe recipe, double scale,
                        std::uint64_t seed) {
  LinearScorer model(shape, feature_dim, recipe);
  Rng rng(seed);
  for (double& w : model.params()) w = static_cast<float>(rng.uniform(-scale, scale));
  return model;
}

namespace {

struct SampleResult {
  double loss = 0.0;
  int rounds = 0;
  bool solved = false;
};

// Runs the iterative loop for one sample and adds its round-averaged gradient
// into `grad_sum`.
SampleResult run_sample(const LinearScorer& model, Matrix features, Configuration truth,
                        const SolverOptions& solver, int max_rounds, std::vector<double>& grad_sum) {
  std::vector<double> grad(model.param_count(), 0.0);
  SampleResult res;
  for (int round = 0; round < max_rounds; ++round) {
    const LossGrad lg = loss_and_grad(model, features, truth);
    res.loss += lg.loss;
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += lg.grad[i];
    ++res.rounds;

    const Scores scores = linear_score(model, features);
    const Prediction pred =
        predict(scores.unary, scores.binary ? &*scores.binary : nullptr, model.shape(), solver);
    if (pred.config.is_identity()) break;
    Matrix moved(features.rows(), features.cols());
    for (int s = 0; s < pred.config.size(); ++s) {
      std::copy(features.row(s).begin(), features.row(s).end(), moved.row(pred.config[s]).begin());
    }
    features = std::move(moved);
    truth = reorganize(truth, pred.config);
  }
  res.solved = truth.is_identity();
  res.loss /= res.rounds;
  for (std::size_t i = 0; i < grad.size(); ++i) grad_sum[i] += grad[i] / res.rounds;
  return res;
}

struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;  // 1 / std, or 1 for constant features
};

Standardizer fit_standardizer(const std::vector<Matrix>& features) {
  const std::size_t d = features.front().cols();
  Standardizer st{std::vector<double>(d, 0.0), std::vector<double>(d, 1.0)};
  std::vector<double> sq(d, 0.0);
  double count = 0.0;
  for (const auto& f : features) {
    for (std::size_t r = 0; r < f.rows(); ++r) {
      for (std::size_t i = 0; i < d; ++i) st.mean[i] += f(r, i);
      count += 1.0;
    }
  }
  for (double& m : st.mean) m /= count;
  for (const auto& f : features) {
    for (std::size_t r = 0; r < f.rows(); ++r) {
      for (std::size_t i = 0; i < d; ++i) sq[i] += (f(r, i) - st.mean[i]) * (f(r, i) - st.mean[i]);
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    const double sd = std::sqrt(sq[i] / count);
    st.scale[i] = sd > 1e-12 ? 1.0 / sd : 1.0;
  }
  return st;
}

void apply(const Standardizer& st, Matrix& f) {
  for (std::size_t r = 0; r < f.rows(); ++r) {
    for (std::size_t i = 0; i < f.cols(); ++i) f(r, i) = (f(r, i) - st.mean[i]) * st.scale[i];
  }
}

// Weights acting on standardized features -> weights acting on raw ones.
// Bias absorbs the mean shift.
void fold(const Standardizer& st, LinearScorer& model) {
  const int n = model.cells();
  const int d = model.feature_dim();
  auto p = model.params();
  const std::size_t in = static_cast<std::size_t>(n) * d;
  double* wu = p.data();
  double* bu = wu + model.unary_w_size();
  double* wb = bu + model.unary_b_size();
  double* bb = wb + model.binary_w_size();
  for (std::size_t k = 0; k < model.unary_b_size(); ++k) {
    double shift = 0.0;
    for (std::size_t j = 0; j < in; ++j) {
      const std::size_t i = j % d;
      wu[k * in + j] *= st.scale[i];
      shift += wu[k * in + j] * st.mean[i];
    }
    bu[k] -= shift;
  }
  for (int r = 0; r < kNumRelClasses; ++r) {
    double shift = 0.0;
    for (int j = 0; j < 2 * d; ++j) {
      const int i = j % d;
      wb[r * 2 * d + j] *= st.scale[i];
      shift += wb[r * 2 * d + j] * st.mean[i];
    }
    bb[r] -= shift;
  }
  for (double& w : p) w = static_cast<float>(w);
}

// Inverse of fold, used when training continues from a raw-space model.
void unfold(const Standardizer& st, LinearScorer& model) {
  const int n = model.cells();
  const int d = model.feature_dim();
  auto p = model.params();
  const std::size_t in = static_cast<std::size_t>(n) * d;
  double* wu = p.data();
  double* bu = wu + model.unary_w_size();
  double* wb = bu + model.unary_b_size();
  double* bb = wb + model.binary_w_size();
  for (std::size_t k = 0; k < model.unary_b_size(); ++k) {
    for (std::size_t j = 0; j < in; ++j) {
      const std::size_t i = j % d;
      bu[k] += wu[k * in + j] * st.mean[i];
      wu[k * in + j] /= st.scale[i];
    }
  }
  for (int r = 0; r < kNumRelClasses; ++r) {
    for (int j = 0; j < 2 * d; ++j) {
      const int i = j % d;
      bb[r] += wb[r * 2 * d + j] * st.mean[i];
      wb[r * 2 * d + j] /= st.scale[i];
    }
  }
}

}  // namespace

namespace {

std::vector<Matrix> corpus_features(const std::vector<PuzzleInstance>& corpus, const GridShape& shape, int d) {
  std::vector<Matrix> features;
  features.reserve(corpus.size());
  for (const auto& p : corpus) {
    if (!(p.shape == shape)) throw ConfigError("corpus grid does not match the model grid");
    if (!p.has_pixels()) throw DomainError("training puzzles need patch pixels");
    features.push_back(feature_set(p.patches));
    if (features.back().cols() != static_cast<std::size_t>(d)) {
      throw ConfigError("corpus feature dimension does not match the model");
    }
  }
  return features;
}

// SGD in standardized feature space; `model` and `features` are both in
// that space.
void run_epochs(LinearScorer& model, const std::vector<Matrix>& features, const std::vector<PuzzleInstance>& corpus,
                const TrainOptions& opts, const std::function<void(const EpochStats&)>& on_epoch) {
  Rng rng(opts.seed ^ 0x5eedf00dULL);
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> grad_sum(model.param_count());
  for (int epoch = 1; epoch <= opts.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.uniform_below(i)]);
    EpochStats stats;
    stats.epoch = epoch;
    for (std::size_t start = 0; start < order.size(); start += opts.batch_size) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(opts.batch_size));
      std::fill(grad_sum.begin(), grad_sum.end(), 0.0);
      for (std::size_t k = start; k < end; ++k) {
        const std::size_t idx = order[k];
        const SampleResult r =
            run_sample(model, features[idx], corpus[idx].truth, opts.solver, opts.train_rounds, grad_sum);
        stats.mean_loss += r.loss;
        stats.mean_rounds += r.rounds;
        stats.solved_fraction += r.solved;
      }
      const double scale = opts.learning_rate / static_cast<double>(end - start);
      auto params = model.params();
      for (std::size_t i = 0; i < params.size(); ++i) {
        params[i] = static_cast<float>(params[i] - scale * grad_sum[i]);
      }
    }
    const double count = static_cast<double>(order.size());
    stats.mean_loss /= count;
    stats.mean_rounds /= count;
    stats.solved_fraction /= count;
    if (on_epoch) on_epoch(stats);
  }
}

}  // namespace

void train_sgd(LinearScorer& model, const std::vector<PuzzleInstance>& corpus, const TrainOptions& opts,
               const std::function<void(const EpochStats&)>& on_epoch) {
  opts.validate();
  if (corpus.empty()) throw DomainError("training corpus is empty");
  std::vector<Matrix> features = corpus_features(corpus, model.shape(), model.feature_dim());
  const Standardizer st = fit_standardizer(features);
  for (auto& f : features) apply(st, f);
  unfold(st, model);
  run_epochs(model, features, corpus, opts, on_epoch);
  fold(st, model);
}

LinearScorer train_sgd(const std::vector<PuzzleInstance>& corpus, const TrainOptions& opts,
                       const std::function<void(const EpochStats&)>& on_epoch) {
  opts.validate();
  if (corpus.empty()) throw DomainError("training corpus is empty");
  const PuzzleInstance& first = corpus.front();
  if (!first.has_pixels()) throw DomainError("training puzzles need patch pixels");
  const int d = static_cast<int>(extract_features(first.patches.front()).size());
  std::vector<Matrix> features = corpus_features(corpus, first.shape, d);
  const Standardizer st = fit_standardizer(features);
  for (auto& f : features) apply(st, f);
  // initial weights are drawn for the standardized space
  LinearScorer model =
      init_model(first.shape, d, recipe_for(first.patches.front()), opts.weight_init_scale, opts.seed);
  run_epochs(model, features, corpus, opts, on_epoch);
  fold(st, model);
  return model;
}

double exact_recovery_rate(const LinearScorer& model, const std::vector<PuzzleInstance>& puzzles,
                           const SolverOptions& opts) {
  if (puzzles.empty()) return 0.0;
  LinearProvider provider(model);
  int solved = 0;
  for (const auto& p : puzzles) solved += solve_iterative(provider, p, opts).solved.value_or(false);
  return static_cast<double>(solved) / static_cast<double>(puzzles.size());
}

}  // namespace jigsolve

#include "jigsolve/search.hpp"

#include <algorithm>
#include <numeric>

#include "jigsolve/errors.hpp"

namespace jigsolve {

void SolverOptions::validate() const {
  if (radius < 0) throw DomainError("radius must be >= 0");
  if (max_rounds < 1) throw DomainError("max_rounds must be >= 1");
  if (candidate_cap && *candidate_cap < 1) throw DomainError("candidate_cap must be >= 1");
}

Configuration refine_with_binary(const UnaryMatrix& u, const BinaryTable& v, const Configuration& seed,
                                 const GridShape& shape, int radius, std::optional<std::uint64_t> candidate_cap) {
  if (!shape.is_2d()) throw UnsupportedError("binary refinement is not defined on 3D grids");
  if (seed.size() != shape.size() || u.size() != shape.size()) throw DomainError("refine: size mismatch");
  const CostEvaluator eval(u, &v, shape);
  const std::uint64_t cap = candidate_cap.value_or(UINT64_MAX);

  std::vector<int> best(seed.values().begin(), seed.values().end());
  double best_cost = eval.evaluate(best).total;
  int best_distance = 0;
  std::uint64_t seen = 0;
  for_each_in_hamming_ball(seed, std::min(radius, seed.size()), [&](std::span<const int> cand, int distance) {
    const double cost = eval.evaluate(cand).total;
    // candidates arrive in non-decreasing distance, so an equal-cost
    // candidate only wins when it is at the same distance and lex-smaller
    if (cost < best_cost ||
        (cost == best_cost && distance == best_distance &&
         std::lexicographical_compare(cand.begin(), cand.end(), best.begin(), best.end()))) {
      best.assign(cand.begin(), cand.end());
      best_cost = cost;
      best_distance = distance;
    }
    return ++seen < cap;
  });
  return Configuration(std::move(best));
}

Prediction predict(const UnaryMatrix& u, const BinaryTable* v, const GridShape& shape, const SolverOptions& opts) {
  opts.validate();
  if (u.size() != shape.size()) throw DomainError("predict: unary matrix does not match grid");
  Prediction out;
  out.config = unary_argmin(u).config;
  const bool binary = opts.use_binary && v != nullptr && shape.is_2d();
  out.binary_disabled = opts.use_binary && !shape.is_2d();
  if (binary && opts.radius >= 2) {
    out.config = refine_with_binary(u, *v, out.config, shape, opts.radius, opts.candidate_cap);
  }
  out.cost = total_cost(u, binary ? v : nullptr, out.config, shape);
  return out;
}

SolveTrace solve_iterative(ScoreProvider& provider, const PuzzleInstance& puzzle, const SolverOptions& opts) {
  opts.validate();
  const int n = puzzle.shape.size();
  const bool truth_known = puzzle.truth.size() == n;
  const Configuration solved = Configuration::identity(n);

  SolveTrace trace;
  trace.initial_truth = puzzle.truth;
  PuzzleInstance current = puzzle;
  for (int round = 1; round <= opts.max_rounds; ++round) {
    Scores scores;
    try {
      scores = provider.score(current);
    } catch (const std::exception& e) {
      throw ProviderError(round, e.what());
    }
    const Prediction pred =
        predict(scores.unary, scores.binary ? &*scores.binary : nullptr, current.shape, opts);
    trace.binary_disabled = trace.binary_disabled || pred.binary_disabled;

    RoundRecord rec{pred.config, pred.cost, std::nullopt, std::nullopt};
    if (truth_known) {
      rec.hamming_to_truth = hamming(pred.config, current.truth);
      rec.distance_before = hamming(current.truth, solved);
    }
    trace.rounds.push_back(std::move(rec));

    if (pred.config.is_identity()) {
      trace.converged = true;
      break;
    }
    current = rearranged(current, pred.config);
  }
  trace.rounds_used = static_cast<int>(trace.rounds.size());
  trace.final_truth = current.truth;
  if (truth_known) trace.solved = current.truth.is_identity();
  return trace;
}

Configuration brute_force_argmin(const UnaryMatrix& u, const BinaryTable* v, const GridShape& shape) {
  const int n = shape.size();
  if (n > kBruteForceMaxCells) throw DomainError("brute force is limited to 9 cells");
  const CostEvaluator eval(u, v, shape);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best = perm;
  double best_cost = eval.evaluate(perm).total;
  while (std::next_permutation(perm.begin(), perm.end())) {
    const double cost = eval.evaluate(perm).total;
    if (cost < best_cost) {
      best_cost = cost;
      best = perm;
    }
  }
  return Configuration(std::move(best));
}

}  // namespace jigsolve

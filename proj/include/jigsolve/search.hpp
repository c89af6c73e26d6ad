#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "jigsolve/assign.hpp"
#include "jigsolve/cost.hpp"
#include "jigsolve/grid.hpp"
#include "jigsolve/puzzle.hpp"

namespace jigsolve {

struct SolverOptions {
  int radius = 3;
  int max_rounds = 20;
  bool use_binary = true;
  std::optional<std::uint64_t> candidate_cap;  // candidates per round, center included

  void validate() const;
};

// Score tables for one arrangement of a puzzle.
struct Scores {
  UnaryMatrix unary;
  std::optional<BinaryTable> binary;
};

// Turns the current arrangement of a puzzle into score tables.
class ScoreProvider {
 public:
  virtual ~ScoreProvider() = default;
  virtual Scores score(const PuzzleInstance& arranged) = 0;
};

// Raised when the provider fails inside solve_iterative.
class ProviderError : public std::runtime_error {
 public:
  ProviderError(int round, const std::string& what)
      : std::runtime_error("round " + std::to_string(round) + ": " + what), round_(round) {}
  int round() const { return round_; }

 private:
  int round_;
};

struct Prediction {
  Configuration config;
  CostBreakdown cost;
  bool binary_disabled = false;  // binary requested on a 3D grid and skipped
};

struct RoundRecord {
  Configuration prediction;
  CostBreakdown cost;
  std::optional<int> hamming_to_truth;  // prediction vs this round's truth
  std::optional<int> distance_before;   // arrangement's distance from solved entering the round
};

struct SolveTrace {
  std::vector<RoundRecord> rounds;
  bool converged = false;  // stopped because the prediction was the identity
  std::optional<bool> solved;
  int rounds_used = 0;
  bool binary_disabled = false;
  Configuration initial_truth;
  Configuration final_truth;
};

// Best candidate of the Hamming ball around `seed` under unary + binary
// cost. Ties go to the smaller distance from seed, then the
// lexicographically smaller assign array.
Configuration refine_with_binary(const UnaryMatrix& u, const BinaryTable& v, const Configuration& seed,
                                 const GridShape& shape, int radius,
                                 std::optional<std::uint64_t> candidate_cap = std::nullopt);

// Hungarian seed on the unary terms, then (if enabled and available) the
// Hamming-ball refinement with binary terms.
Prediction predict(const UnaryMatrix& u, const BinaryTable* v, const GridShape& shape, const SolverOptions& opts);

// Scores, predicts and rearranges until the prediction is the identity or
// max_rounds is reached.
SolveTrace solve_iterative(ScoreProvider& provider, const PuzzleInstance& puzzle, const SolverOptions& opts);

inline constexpr int kBruteForceMaxCells = 9;

// Exhaustive minimum of total_cost over all permutations (n <= 9),
// lexicographically smallest among ties.
Configuration brute_force_argmin(const UnaryMatrix& u, const BinaryTable* v, const GridShape& shape);

}  // namespace jigsolve

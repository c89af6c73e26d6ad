#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "common.hpp"
#include "jigsolve/grid.hpp"
#include "jigsolve/puzzle.hpp"
#include "jigsolve/scorer.hpp"
#include "jigsolve/search.hpp"

namespace jigsolve::cli {

// Where the puzzles of a run come from: a corpus on disk, or truth-only
// puzzles drawn from the seed.
struct PuzzleSet {
  GridShape shape;
  std::size_t count = 0;
  std::filesystem::path corpus;  // empty for truth-only
  std::uint64_t seed = 0;

  static PuzzleSet from_corpus(const std::filesystem::path& corpus);
  static PuzzleSet truth_only(const GridShape& shape, std::size_t count, std::uint64_t seed);

  PuzzleInstance load(std::size_t index, bool with_pixels) const;
  std::string describe() const;
};

struct ScorerChoice {
  const LinearScorer* model = nullptr;
  std::string model_path;
  double unary_noise = 0.0;
  double binary_noise = 0.0;

  std::string describe() const;
};

struct RunConfig {
  ScorerChoice scorer;
  SolverOptions solver;
  std::uint64_t seed = 1;
  int threads = 1;
  bool timing = false;
};

struct RunResult {
  Json aggregate;
  double wall_time = 0.0;
};

// Solves every puzzle of the set, writing one record per puzzle (when
// `puzzle_records`) in index order and returning the aggregate record.
RunResult run_solve(const PuzzleSet& set, const RunConfig& config, ReportWriter* report, bool puzzle_records);

// Exact decimal n! for the grid's cell count, with a float rendering for
// large values.
Json configuration_space(const GridShape& shape);

// Reads the list of grids/values from a comma separated flag.
std::vector<std::string> split_list(const std::string& s);

std::filesystem::path corpus_index_path(const std::filesystem::path& corpus);

}  // namespace jigsolve::cli

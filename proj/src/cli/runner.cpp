#include "runner.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "jigsolve/errors.hpp"

namespace jigsolve::cli {

namespace {

// Salt separating the oracle's noise stream from the puzzle's own stream.
constexpr std::uint64_t kOracleSalt = 0x6f7261636c65ULL;

int distance_from_solved(const Configuration& truth) {
  return hamming(truth, Configuration::identity(truth.size()));
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

struct Outcome {
  SolveTrace trace;
  std::vector<int> distance_after;  // arrangement distance after each round
};

Outcome solve_one(const PuzzleSet& set, std::size_t index, const RunConfig& config) {
  const bool pixels = config.scorer.model != nullptr;
  const PuzzleInstance puzzle = set.load(index, pixels);
  Outcome out;
  if (pixels) {
    LinearProvider provider(*config.scorer.model);
    out.trace = solve_iterative(provider, puzzle, config.solver);
  } else {
    OracleScorer provider(config.scorer.unary_noise, config.scorer.binary_noise, (config.seed ^ kOracleSalt) + index);
    out.trace = solve_iterative(provider, puzzle, config.solver);
  }
  Configuration truth = out.trace.initial_truth;
  for (const auto& round : out.trace.rounds) {
    if (!round.prediction.is_identity()) truth = reorganize(truth, round.prediction);
    out.distance_after.push_back(distance_from_solved(truth));
  }
  return out;
}

Json puzzle_record(std::size_t index, const Outcome& o) {
  Json costs = Json::array();
  for (const auto& r : o.trace.rounds) costs.push_back(r.cost.total);
  const int final_hamming = distance_from_solved(o.trace.final_truth);
  return Json{{"type", "puzzle"},
              {"index", index},
              {"rounds_used", o.trace.rounds_used},
              {"converged", o.trace.converged},
              {"solved", final_hamming == 0},
              {"initial_hamming", distance_from_solved(o.trace.initial_truth)},
              {"final_hamming", final_hamming},
              {"distance_after", o.distance_after},
              {"round_cost", costs},
              {"binary_disabled", o.trace.binary_disabled}};
}

}  // namespace

std::filesystem::path corpus_index_path(const std::filesystem::path& corpus) { return corpus / "corpus.txt"; }

PuzzleSet PuzzleSet::from_corpus(const std::filesystem::path& corpus) {
  const auto index = corpus_index_path(corpus);
  if (!std::filesystem::exists(index)) throw FormatError("corpus not found: " + corpus.string());
  const Manifest m = read_manifest(index);
  PuzzleSet set;
  set.corpus = corpus;
  try {
    set.shape = GridShape::parse(m.at("grid"));
    set.count = std::stoull(m.at("count"));
    set.seed = std::stoull(m.at("seed"));
  } catch (const std::out_of_range&) {
    throw FormatError("incomplete corpus index " + index.string());
  } catch (const std::invalid_argument&) {
    throw FormatError("malformed corpus index " + index.string());
  }
  return set;
}

PuzzleSet PuzzleSet::truth_only(const GridShape& shape, std::size_t count, std::uint64_t seed) {
  PuzzleSet set;
  set.shape = shape;
  set.count = count;
  set.seed = seed;
  return set;
}

PuzzleInstance PuzzleSet::load(std::size_t index, bool with_pixels) const {
  if (corpus.empty()) {
    if (with_pixels) throw ConfigError("a model needs a corpus with pixels (--corpus)");
    Rng rng = Rng::for_item(seed, index);
    return make_truth_only_puzzle(shape, rng);
  }
  PuzzleInstance p = load_puzzle(instance_dir(corpus, index), with_pixels);
  if (p.shape != shape) {
    throw FormatError("instance " + std::to_string(index) + " has grid " + p.shape.to_string() + ", corpus says " +
                      shape.to_string());
  }
  return p;
}

std::string PuzzleSet::describe() const { return corpus.empty() ? "truth-only" : corpus.string(); }

std::string ScorerChoice::describe() const {
  if (model) return "model:" + model_path;
  return "oracle(unary=" + format_double(unary_noise) + ",binary=" + format_double(binary_noise) + ")";
}

Json configuration_space(const GridShape& shape) {
  const int n = shape.size();
  std::ostringstream approx;
  approx.precision(3);
  approx << factorial_approx(n);
  return Json{{"cells", n}, {"exact", factorial_decimal(n)}, {"approx", approx.str()}};
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

RunResult run_solve(const PuzzleSet& set, const RunConfig& config, ReportWriter* report, bool puzzle_records) {
  config.solver.validate();
  if (config.scorer.model && config.scorer.model->shape() != set.shape) {
    throw ConfigError("model grid " + config.scorer.model->shape().to_string() + " does not match puzzles " +
                      set.shape.to_string());
  }
  const auto start = std::chrono::steady_clock::now();

  const int max_rounds = config.solver.max_rounds;
  std::size_t exact = 0, near = 0, converged = 0;
  double rounds_sum = 0.0, first_cost_sum = 0.0;
  bool binary_disabled = false;
  std::vector<std::size_t> solved_by_round(static_cast<std::size_t>(max_rounds), 0);

  // Puzzles are solved in blocks so the report grows in index order while
  // workers stay busy.
  constexpr std::size_t kBlock = 256;
  std::vector<Outcome> block;
  for (std::size_t begin = 0; begin < set.count; begin += kBlock) {
    const std::size_t end = std::min(set.count, begin + kBlock);
    block.assign(end - begin, Outcome{});
    parallel_for(begin, end, config.threads, [&](std::size_t i) { block[i - begin] = solve_one(set, i, config); });
    for (std::size_t i = begin; i < end; ++i) {
      const Outcome& o = block[i - begin];
      const int final_hamming = distance_from_solved(o.trace.final_truth);
      exact += final_hamming == 0;
      near += final_hamming <= 2;
      converged += o.trace.converged;
      rounds_sum += o.trace.rounds_used;
      first_cost_sum += o.trace.rounds.front().cost.total;
      binary_disabled = binary_disabled || o.trace.binary_disabled;
      for (int r = 0; r < max_rounds; ++r) {
        const auto k = std::min(static_cast<std::size_t>(r), o.distance_after.size() - 1);
        solved_by_round[static_cast<std::size_t>(r)] += o.distance_after[k] == 0;
      }
      if (report && puzzle_records) report->write(puzzle_record(i, o));
    }
  }

  const double count = static_cast<double>(std::max<std::size_t>(set.count, 1));
  Json curve = Json::array();
  for (auto s : solved_by_round) curve.push_back(static_cast<double>(s) / count);

  RunResult result;
  result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Json& a = result.aggregate;
  a = Json{{"type", "aggregate"},
           {"seed", config.seed},
           {"grid", set.shape.to_string()},
           {"puzzles", set.describe()},
           {"scorer", config.scorer.describe()},
           {"radius", config.solver.radius},
           {"max_rounds", max_rounds},
           {"use_binary", config.solver.use_binary},
           {"candidate_cap", config.solver.candidate_cap ? Json(*config.solver.candidate_cap) : Json(nullptr)},
           {"count", set.count},
           {"exact", exact},
           {"d_le_2", near},
           {"exact_rate", static_cast<double>(exact) / count},
           {"d_le_2_rate", static_cast<double>(near) / count},
           {"converged_rate", static_cast<double>(converged) / count},
           {"mean_rounds", rounds_sum / count},
           {"mean_first_cost", first_cost_sum / count},
           {"solved_by_round", curve},
           {"binary_disabled", binary_disabled},
           {"configuration_space", configuration_space(set.shape)}};
  if (config.timing) a["wall_time"] = result.wall_time;
  return result;
}

}  // namespace jigsolve::cli

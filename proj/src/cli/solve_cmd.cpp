#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>

#include "commands.hpp"
#include "common.hpp"
#include "jigsolve/cli.hpp"
#include "jigsolve/errors.hpp"
#include "jigsolve/features.hpp"
#include "runner.hpp"

namespace jigsolve::cli {

namespace {

// Flags shared by solve and bench.
struct SourceArgs {
  std::string corpus;
  std::string grid = "3x3";
  std::size_t count = 100;
  std::uint64_t seed = 1;
  std::string model;
  std::uint64_t candidate_cap = 0;
  int threads = 0;
  bool timing = false;
  CLI::Option* grid_opt = nullptr;
  CLI::Option* count_opt = nullptr;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--corpus", corpus, "Corpus directory; empty draws truth-only puzzles (oracle only)");
    grid_opt = cmd.add_option("--grid", grid, "Grid for truth-only puzzles");
    count_opt = cmd.add_option("--count", count, "Number of truth-only puzzles");
    cmd.add_option("--seed", seed, "Seed for truth-only puzzles and oracle noise");
    cmd.add_option("--model", model, "Model file written by train");
    cmd.add_option("--candidate-cap", candidate_cap, "Candidates per round, 0 for the whole ball");
    cmd.add_flag("--timing", timing, "Also put wall time into the report");
    add_threads_flag(cmd, threads);
  }

  PuzzleSet puzzles() const {
    if (corpus.empty()) {
      if (count == 0) throw UsageError("--count must be positive");
      return PuzzleSet::truth_only(GridShape::parse(grid), count, seed);
    }
    PuzzleSet set = PuzzleSet::from_corpus(corpus);
    if (grid_opt->count() > 0 && GridShape::parse(grid) != set.shape) {
      throw ConfigError("--grid " + grid + " does not match corpus grid " + set.shape.to_string());
    }
    if (count_opt->count() > 0) set.count = std::min(set.count, count);
    return set;
  }

  std::optional<std::uint64_t> cap() const {
    return candidate_cap == 0 ? std::nullopt : std::optional<std::uint64_t>(candidate_cap);
  }
};

struct SolveArgs {
  SourceArgs src;
  double oracle = -1.0;
  double oracle_binary = -1.0;
  int radius = 3;
  int max_rounds = 20;
  bool no_binary = false;
  std::string report = "report.jsonl";
};

void print_summary(std::ostream& out, const Json& a) {
  out << std::fixed << std::setprecision(4) << "exact " << a["exact_rate"].get<double>() << "  d<=2 "
      << a["d_le_2_rate"].get<double>() << "  mean rounds " << std::setprecision(2) << a["mean_rounds"].get<double>()
      << "  puzzles " << a["count"].get<std::size_t>() << std::defaultfloat << '\n';
}

int run_solve_cmd(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  const bool has_oracle = a.oracle >= 0.0;
  if (has_oracle == !a.src.model.empty()) throw UsageError("give exactly one of --model or --oracle");
  if (a.oracle > 1.0 || a.oracle_binary > 1.0) throw UsageError("oracle noise must lie in [0, 1]");

  RunConfig config;
  config.seed = a.src.seed;
  config.threads = resolve_threads(a.src.threads);
  config.timing = a.src.timing;
  config.solver.radius = a.radius;
  config.solver.max_rounds = a.max_rounds;
  config.solver.use_binary = !a.no_binary;
  config.solver.candidate_cap = a.src.cap();
  std::optional<LinearScorer> model;
  if (has_oracle) {
    config.scorer.unary_noise = a.oracle;
    config.scorer.binary_noise = a.oracle_binary >= 0.0 ? a.oracle_binary : a.oracle;
  } else {
    model = load_model(a.src.model);
    config.scorer.model = &*model;
    config.scorer.model_path = a.src.model;
  }
  const PuzzleSet set = a.src.puzzles();
  ReportWriter report(a.report);
  const RunResult r = run_solve(set, config, &report, true);
  report.write(r.aggregate);
  print_summary(out, r.aggregate);
  if (r.aggregate["binary_disabled"].get<bool>()) out << "binary terms disabled on the 3D grid\n";
  err << "wall time " << std::fixed << std::setprecision(3) << r.wall_time << " s\n" << std::defaultfloat;
  return kExitOk;
}

struct BenchArgs {
  SourceArgs src;
  std::string radii = "3";
  std::string rounds = "1,5,10,20";
  std::string binary = "on,off";
  std::string noise = "0.5";
  std::string binary_noise;
  std::string report = "bench.jsonl";
};

template <typename T>
std::vector<T> parse_list(const std::string& flag, const std::string& text, T (*convert)(const std::string&)) {
  std::vector<T> out;
  for (const auto& item : split_list(text)) {
    try {
      out.push_back(convert(item));
    } catch (const std::exception&) {
      throw UsageError(flag + ": bad value '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError(flag + " is empty");
  return out;
}

int to_int(const std::string& s) {
  std::size_t used = 0;
  const int v = std::stoi(s, &used);
  if (used != s.size()) throw std::invalid_argument(s);
  return v;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size() || v < 0.0 || v > 1.0) throw std::invalid_argument(s);
  return v;
}

bool to_switch(const std::string& s) {
  if (s == "on") return true;
  if (s == "off") return false;
  throw std::invalid_argument(s);
}

int run_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  const auto radii = parse_list<int>("--radii", a.radii, to_int);
  const auto rounds = parse_list<int>("--rounds", a.rounds, to_int);
  const auto binaries = parse_list<bool>("--binary", a.binary, to_switch);
  std::vector<double> noises{0.0};
  std::vector<double> binary_noises;
  std::optional<LinearScorer> model;
  if (a.src.model.empty()) {
    noises = parse_list<double>("--noise", a.noise, to_double);
    binary_noises = a.binary_noise.empty() ? noises : parse_list<double>("--binary-noise", a.binary_noise, to_double);
    if (binary_noises.size() != noises.size()) throw UsageError("--binary-noise needs one value per --noise value");
  } else {
    model = load_model(a.src.model);
  }
  const PuzzleSet set = a.src.puzzles();
  ReportWriter report(a.report);

  out << std::left << std::setw(8) << "noise" << std::setw(8) << "radius" << std::setw(8) << "rounds" << std::setw(8)
      << "binary" << std::setw(10) << "exact" << std::setw(10) << "d<=2" << std::setw(10) << "mean_rnd"
      << "first_cost\n";
  double wall = 0.0;
  for (std::size_t k = 0; k < noises.size(); ++k)
    for (int radius : radii)
      for (int max_rounds : rounds)
        for (bool use_binary : binaries) {
          RunConfig config;
          config.seed = a.src.seed;
          config.threads = resolve_threads(a.src.threads);
          config.timing = a.src.timing;
          config.solver.radius = radius;
          config.solver.max_rounds = max_rounds;
          config.solver.use_binary = use_binary;
          config.solver.candidate_cap = a.src.cap();
          if (model) {
            config.scorer.model = &*model;
            config.scorer.model_path = a.src.model;
          } else {
            config.scorer.unary_noise = noises[k];
            config.scorer.binary_noise = binary_noises[k];
          }
          RunResult r = run_solve(set, config, nullptr, false);
          r.aggregate["type"] = "bench";
          report.write(r.aggregate);
          wall += r.wall_time;
          const Json& g = r.aggregate;
          out << std::left << std::setw(8) << (model ? std::string("model") : std::to_string(noises[k]).substr(0, 4))
              << std::setw(8) << radius << std::setw(8) << max_rounds << std::setw(8) << (use_binary ? "on" : "off")
              << std::fixed << std::setprecision(4) << std::setw(10) << g["exact_rate"].get<double>() << std::setw(10)
              << g["d_le_2_rate"].get<double>() << std::setprecision(2) << std::setw(10)
              << g["mean_rounds"].get<double>() << std::setprecision(4) << g["mean_first_cost"].get<double>()
              << std::defaultfloat << '\n';
        }
  err << "wall time " << std::fixed << std::setprecision(3) << wall << " s\n" << std::defaultfloat;
  return kExitOk;
}

struct InfoArgs {
  std::string grid = "3x3";
  int radius = 3;
  int channels = 1;
};

int run_info(const InfoArgs& a, std::ostream& out) {
  const GridShape shape = GridShape::parse(a.grid);
  if (a.channels < 1) throw UsageError("--channels must be positive");
  const FeatureRecipe recipe = shape.is_2d() ? FeatureRecipe::k2d : FeatureRecipe::k3d;
  const int d = feature_dim(recipe, a.channels);
  const LinearScorer model(shape, d, recipe);
  const int n = shape.size();
  Json info{{"grid", shape.to_string()},
            {"configuration_space", configuration_space(shape)},
            {"radius", a.radius},
            {"ball_size", a.radius <= n ? Json(hamming_ball_size(n, a.radius)) : Json(nullptr)},
            {"feature_dim", d},
            {"unary_head", {{"inputs", n * d}, {"outputs", n * n}, {"parameters", model.unary_param_count()}}},
            {"binary_head",
             {{"inputs", 2 * d}, {"outputs", kNumRelClasses}, {"parameters", model.binary_param_count()},
              {"used", model.uses_binary()}}}};
  out << info.dump() << '\n';
  return kExitOk;
}

}  // namespace

void add_solve(CLI::App& app, Action& action) {
  auto a = std::make_shared<SolveArgs>();
  CLI::App* cmd = app.add_subcommand("solve", "Solve puzzles and report per-puzzle and aggregate records");
  a->src.add_to(*cmd);
  cmd->add_option("--oracle", a->oracle, "Oracle unary noise in [0,1]; negative means unset");
  cmd->add_option("--oracle-binary", a->oracle_binary, "Oracle binary noise; negative follows --oracle");
  cmd->add_option("--radius", a->radius, "Hamming radius of the binary refinement");
  cmd->add_option("--max-rounds", a->max_rounds, "Reorganization rounds");
  cmd->add_flag("--no-binary", a->no_binary, "Unary terms only");
  cmd->add_option("--report", a->report, "Report file (one JSON record per line)");
  cmd->callback([a, &action] {
    action = [a](std::ostream& out, std::ostream& err) { return run_solve_cmd(*a, out, err); };
  });
}

void add_bench(CLI::App& app, Action& action) {
  auto a = std::make_shared<BenchArgs>();
  CLI::App* cmd = app.add_subcommand("bench", "Sweep solver settings over one puzzle set");
  a->src.count = 200;
  a->src.add_to(*cmd);
  cmd->add_option("--radii", a->radii, "Comma separated radii");
  cmd->add_option("--rounds", a->rounds, "Comma separated round caps");
  cmd->add_option("--binary", a->binary, "Comma separated on/off");
  cmd->add_option("--noise", a->noise, "Comma separated oracle unary noise levels");
  cmd->add_option("--binary-noise", a->binary_noise, "Oracle binary noise per --noise value; empty follows --noise");
  cmd->add_option("--report", a->report, "Report file (one JSON record per line)");
  cmd->callback([a, &action] {
    action = [a](std::ostream& out, std::ostream& err) { return run_bench(*a, out, err); };
  });
}

void add_info(CLI::App& app, Action& action) {
  auto a = std::make_shared<InfoArgs>();
  CLI::App* cmd = app.add_subcommand("info", "Print configuration-space and model sizes for a grid");
  cmd->add_option("--grid", a->grid, "Grid WxH or WxHxZ");
  cmd->add_option("--radius", a->radius, "Radius for the Hamming-ball size");
  cmd->add_option("--channels", a->channels, "Image channels for the feature size");
  cmd->callback([a, &action] { action = [a](std::ostream& out, std::ostream&) { return run_info(*a, out); }; });
}

}  // namespace jigsolve::cli

// Acceptance suite: one PASS/FAIL line per criterion. Run with no arguments
// for all of them, or with criterion numbers to select some.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "jigsolve/assign.hpp"
#include "jigsolve/cli.hpp"
#include "jigsolve/image.hpp"
#include "jigsolve/puzzlegen.hpp"
#include "jigsolve/scorer.hpp"
#include "jigsolve/search.hpp"
#include "jigsolve/train.hpp"
#include "oracles.hpp"

using namespace jigsolve;
namespace fs = std::filesystem;

namespace {

// Tolerances and budgets.
constexpr int kAssignMatricesPerSize = 2000;  // n = 2..6, 10 000 in total
constexpr double kAssignBudget = 30.0;
constexpr int kFullSearch2x2 = 1000;
constexpr int kFullSearch3x3 = 200;
constexpr double kFullSearchBudget = 120.0;
constexpr double kBallBudget = 60.0;
constexpr int kPerfectOraclePuzzles = 100;
constexpr double kPerfectOracleBudget = 60.0;
constexpr int kNoiseTrials = 500;
constexpr double kNoiseSlack = 0.02;
constexpr double kNoiseBudget = 120.0;
constexpr int kBinaryTrials = 500;
constexpr double kBinaryUnaryNoise = 0.5;
constexpr double kBinaryBinaryNoise = 0.1;
constexpr double kBinaryMargin = 0.05;
constexpr double kBinaryBudget = 120.0;
constexpr int kRoundsTrials = 1000;
constexpr double kRoundsNoise = 0.5;
constexpr double kRoundsSlack = 0.0;
constexpr double kRoundsBudget = 120.0;
constexpr int kGradInstances = 50;
constexpr double kGradStep = 1e-5;
constexpr double kGradMaxRelative = 1e-4;
constexpr double kGradDenominatorFloor = 1e-6;
constexpr double kGradBudget = 60.0;
constexpr int kTrainPuzzles = 2000;
constexpr int kHeldOutPuzzles = 500;
constexpr double kTrainFloor = 10.0 / 24.0;
constexpr double kTrainBudget = 300.0;
constexpr double kFactsBudget = 1.0;
constexpr double kDeterminismBudget = 60.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string rate(int hits, int total) { return std::to_string(hits) + "/" + std::to_string(total); }

struct CliResult {
  int code;
  std::string out;
};

CliResult jig(std::vector<std::string> args) {
  args.insert(args.begin(), "jigsolve");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str()};
}

std::string slurp(const fs::path& p) {
  const auto b = read_file(p);
  return {b.begin(), b.end()};
}

// Truth-only puzzle that is not already solved.
PuzzleInstance scrambled(const GridShape& shape, Rng& rng) {
  for (;;) {
    PuzzleInstance p = make_truth_only_puzzle(shape, rng);
    if (!p.truth.is_identity()) return p;
  }
}

// Paired oracle runs: puzzle t and its noise stream are shared by every
// setting.
int solved_count(int trials, std::uint64_t seed, double unary_noise, double binary_noise, const SolverOptions& opts) {
  const GridShape g{3, 3};
  int solved = 0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng::for_item(seed, static_cast<std::uint64_t>(t));
    const PuzzleInstance p = make_truth_only_puzzle(g, rng);
    OracleScorer oracle(unary_noise, binary_noise, (seed ^ 0xabcdefULL) + static_cast<std::uint64_t>(t));
    solved += solve_iterative(oracle, p, opts).final_truth.is_identity();
  }
  return solved;
}

Outcome ac1() {
  Rng rng(101);
  int ok = 0, total = 0;
  std::string first_bad;
  for (int n = 2; n <= 6; ++n) {
    for (int t = 0; t < kAssignMatricesPerSize; ++t, ++total) {
      Matrix m(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
      // Half the matrices hold small integers so that optimal ties occur.
      const bool ties = t % 2 == 1;
      for (auto& x : m.data()) x = ties ? rng.uniform_int(0, 3) : rng.uniform(0.0, 100.0);
      const auto got = min_cost_assignment(m);
      const auto [cost, arr] = oracle::assignment(m);
      if (got.cost == cost && oracle::values(got.config) == arr) {
        ++ok;
      } else if (first_bad.empty()) {
        first_bad = " first mismatch n=" + std::to_string(n) + " trial " + std::to_string(t);
      }
    }
  }
  return {ok == total, rate(ok, total) + " matrices match exhaustive search (cost exact, assign array exact)" + first_bad};
}

Outcome ac2() {
  Rng rng(202);
  int ok = 0, total = 0;
  for (const auto& [shape, count] : {std::pair{GridShape{2, 2}, kFullSearch2x2}, std::pair{GridShape{3, 3}, kFullSearch3x3}}) {
    SolverOptions opts;
    opts.radius = shape.size();
    for (int t = 0; t < count; ++t, ++total) {
      const auto u = oracle::random_unary(shape.size(), rng);
      const auto v = oracle::random_binary(shape.size(), rng);
      ok += predict(u, &v, shape, opts).config == brute_force_argmin(u, &v, shape);
    }
  }
  return {ok == total, rate(ok, total) + " full-radius predictions equal brute_force_argmin (2x2: " +
                           std::to_string(kFullSearch2x2) + ", 3x3: " + std::to_string(kFullSearch3x3) + ")"};
}

Outcome ac3() {
  Rng rng(303);
  int ok = 0, total = 0;
  for (int n = 1; n <= 7; ++n) {
    const auto perms = oracle::all_permutations(n);
    const Configuration center = random_permutation(n, rng);
    for (int r = 0; r <= n; ++r, ++total) {
      std::uint64_t formula = 1;
      for (int k = 2; k <= r; ++k) {
        // C(n,k) * D_k from scratch.
        std::uint64_t c = 1, d0 = 1, d1 = 0;
        for (int i = 1; i <= k; ++i) c = c * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
        for (int i = 2; i <= k; ++i) {
          const std::uint64_t d2 = static_cast<std::uint64_t>(i - 1) * (d0 + d1);
          d0 = d1;
          d1 = d2;
        }
        formula += c * d1;
      }
      std::uint64_t filtered = 0;
      for (const auto& p : perms) filtered += hamming(Configuration(p), center) <= r;
      const auto ball = enumerate_hamming_ball(center, r);
      std::set<Configuration> unique(ball.begin(), ball.end());
      bool inside = true;
      for (const auto& p : ball) inside = inside && hamming(p, center) <= r;
      ok += ball.size() == formula && ball.size() == filtered && unique.size() == ball.size() && inside;
    }
  }
  const auto spot = enumerate_hamming_ball(Configuration::identity(9), 3).size();
  const bool pass = ok == total && spot == 205;
  return {pass, rate(ok, total) + " (n, radius) pairs match formula and filtering for n <= 7; n=9 r=3 gives " +
                    std::to_string(spot)};
}

Outcome ac4() {
  bool pass = true;
  std::string detail;
  for (const GridShape& g : {GridShape{2, 2}, GridShape{3, 3}, GridShape{4, 4}, GridShape{2, 2, 2}, GridShape{3, 3, 3}}) {
    Rng rng(404);
    int ok = 0;
    for (int t = 0; t < kPerfectOraclePuzzles; ++t) {
      const PuzzleInstance p = scrambled(g, rng);
      OracleScorer oracle(0.0, static_cast<std::uint64_t>(t));
      const auto trace = solve_iterative(oracle, p, SolverOptions{});
      ok += trace.final_truth.is_identity() && trace.converged && trace.rounds_used == 2;
    }
    pass = pass && ok == kPerfectOraclePuzzles;
    detail += (detail.empty() ? "" : ", ") + g.to_string() + " " + rate(ok, kPerfectOraclePuzzles);
  }
  return {pass, "solved in exactly 2 rounds: " + detail};
}

Outcome ac5() {
  const SolverOptions defaults;
  const double r2 = solved_count(kNoiseTrials, 505, 0.2, 0.2, defaults) / double(kNoiseTrials);
  const double r4 = solved_count(kNoiseTrials, 505, 0.4, 0.4, defaults) / double(kNoiseTrials);
  const double r6 = solved_count(kNoiseTrials, 505, 0.6, 0.6, defaults) / double(kNoiseTrials);
  const bool pass = r2 >= r4 - kNoiseSlack && r4 >= r6 - kNoiseSlack;
  return {pass, "exact rate e=0.2 " + fmt("%.3f", r2) + ", e=0.4 " + fmt("%.3f", r4) + ", e=0.6 " + fmt("%.3f", r6) +
                    " (slack " + fmt("%.2f", kNoiseSlack) + ", " + std::to_string(kNoiseTrials) + " paired trials)"};
}

Outcome ac6() {
  SolverOptions on, off;
  off.use_binary = false;
  const double with = solved_count(kBinaryTrials, 606, kBinaryUnaryNoise, kBinaryBinaryNoise, on) / double(kBinaryTrials);
  const double without =
      solved_count(kBinaryTrials, 606, kBinaryUnaryNoise, kBinaryBinaryNoise, off) / double(kBinaryTrials);
  return {with >= without + kBinaryMargin, "exact rate binary on " + fmt("%.3f", with) + ", off " +
                                               fmt("%.3f", without) + " (needs a gap of " + fmt("%.2f", kBinaryMargin) +
                                               ")"};
}

Outcome ac7() {
  SolverOptions twenty, one;
  one.max_rounds = 1;
  const double r20 = solved_count(kRoundsTrials, 707, kRoundsNoise, kRoundsNoise, twenty) / double(kRoundsTrials);
  const double r1 = solved_count(kRoundsTrials, 707, kRoundsNoise, kRoundsNoise, one) / double(kRoundsTrials);
  return {r20 >= r1 - kRoundsSlack,
          "exact rate max_rounds=20 " + fmt("%.3f", r20) + ", max_rounds=1 " + fmt("%.3f", r1) + " at e=0.5"};
}

Outcome ac8() {
  Rng rng(808);
  double worst = 0.0;
  std::size_t checked = 0;
  for (int i = 0; i < kGradInstances; ++i) {
    const GridShape g = i % 2 == 0 ? GridShape{2, 2} : GridShape{3, 3};
    const int n = g.size();
    const int d = n == 4 ? 22 : 8;
    LinearScorer m(g, d, FeatureRecipe::k2d);
    for (auto& w : m.params()) w = rng.uniform(-0.2, 0.2);
    Matrix f(static_cast<std::size_t>(n), static_cast<std::size_t>(d));
    for (auto& x : f.data()) x = rng.uniform(-1.0, 1.0);
    const Configuration truth = random_permutation(n, rng);
    const auto analytic = loss_and_grad(m, f, truth).grad;
    auto p = m.params();
    for (std::size_t k = 0; k < p.size(); ++k, ++checked) {
      const double keep = p[k];
      p[k] = keep + kGradStep;
      const double up = loss_and_grad(m, f, truth).loss;
      p[k] = keep - kGradStep;
      const double down = loss_and_grad(m, f, truth).loss;
      p[k] = keep;
      const double numeric = (up - down) / (2 * kGradStep);
      const double denom = std::max({std::abs(numeric), std::abs(analytic[k]), kGradDenominatorFloor});
      worst = std::max(worst, std::abs(numeric - analytic[k]) / denom);
    }
  }
  return {worst < kGradMaxRelative, "max relative error " + fmt("%.2e", worst) + " over " + std::to_string(checked) +
                                        " coordinates of " + std::to_string(kGradInstances) +
                                        " instances (n=4, n=9; floor " + fmt("%.0e", kGradDenominatorFloor) + ")"};
}

Outcome ac9() {
  PuzzleOptions opts;
  opts.mirror_p = 0.0;
  opts.mean_mode = MeanMode::kGlobal;
  auto make = [&](std::size_t count, std::uint64_t base) {
    std::vector<PuzzleInstance> out;
    for (std::size_t i = 0; i < count; ++i)
      out.push_back(make_puzzle_2d(synth_image(SynthKind::kMixed, 128, 10000 + base + i), 2, 2, 500 + base + i, opts));
    return out;
  };
  const auto train = make(kTrainPuzzles, 0);
  const auto held_out = make(kHeldOutPuzzles, 100000);
  const TrainOptions defaults;
  std::vector<double> losses;
  const auto model = train_sgd(train, defaults, [&](const EpochStats& e) { losses.push_back(e.mean_loss); });
  const auto untrained = init_model(GridShape{2, 2}, model.feature_dim(), model.recipe(), defaults.weight_init_scale,
                                    defaults.seed);
  const double trained_rate = exact_recovery_rate(model, held_out, defaults.solver);
  const double untrained_rate = exact_recovery_rate(untrained, held_out, defaults.solver);
  const bool pass = trained_rate >= kTrainFloor && trained_rate > untrained_rate && losses.back() < losses.front();
  return {pass, "held-out exact " + fmt("%.3f", trained_rate) + " (floor " + fmt("%.3f", kTrainFloor) +
                    "), untrained " + fmt("%.3f", untrained_rate) + ", epoch loss " + fmt("%.3f", losses.front()) +
                    " -> " + fmt("%.3f", losses.back())};
}

Outcome ac10() {
  using Json = nlohmann::json;
  const auto nine = Json::parse(jig({"info", "--grid", "3x3"}).out);
  const auto cube = Json::parse(jig({"info", "--grid", "3x3x3"}).out);
  const double approx = std::stod(cube["configuration_space"]["approx"].get<std::string>());
  const LinearScorer m(GridShape{3, 3}, 22, FeatureRecipe::k2d);
  const bool heads = m.unary_w_size() == 81u * 198u && m.unary_b_size() == 81u && m.binary_w_size() == 9u * 44u &&
                     m.binary_b_size() == 9u && m.unary_param_count() == 16119u && m.binary_param_count() == 405u;
  const bool pass = nine["configuration_space"]["exact"] == "362880" &&
                    cube["configuration_space"]["exact"] == "10888869450418352160768000000" &&
                    std::abs(approx / 1e28 - 1.1) < 0.05 && nine["unary_head"]["parameters"] == 16119 &&
                    nine["binary_head"]["parameters"] == 405 && heads;
  return {pass, "3x3: " + nine["configuration_space"]["exact"].get<std::string>() + ", 3x3x3: " +
                    cube["configuration_space"]["approx"].get<std::string>() + ", heads 16119 + 405 parameters at d=22"};
}

Outcome ac11() {
  const fs::path dir = fs::temp_directory_path() / "jigsolve_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto solve = [&](const std::vector<std::string>& extra, const std::string& threads, const std::string& name) {
    std::vector<std::string> args{"solve", "--seed", "11", "--threads", threads, "--report", (dir / name).string()};
    args.insert(args.end(), extra.begin(), extra.end());
    return jig(args).code == 0;
  };
  bool ok = true;
  const std::vector<std::string> oracle{"--oracle", "0.5", "--grid", "3x3", "--count", "1000"};
  ok = ok && solve(oracle, "1", "o1.jsonl") && solve(oracle, "8", "o8.jsonl");
  ok = ok && jig({"gen", "--grid", "2x2", "--count", "200", "--image-size", "96", "--out", (dir / "c").string()}).code == 0;
  ok = ok && jig({"train", "--corpus", (dir / "c").string(), "--epochs", "2", "--out", (dir / "m.jsw").string(), "--log",
                  (dir / "log.jsonl").string()})
                     .code == 0;
  const std::vector<std::string> model{"--corpus", (dir / "c").string(), "--model", (dir / "m.jsw").string()};
  ok = ok && solve(model, "1", "m1.jsonl") && solve(model, "8", "m8.jsonl");
  const bool same_oracle = ok && slurp(dir / "o1.jsonl") == slurp(dir / "o8.jsonl");
  const bool same_model = ok && slurp(dir / "m1.jsonl") == slurp(dir / "m8.jsonl");
  fs::remove_all(dir);
  return {ok && same_oracle && same_model, std::string("reports at 1 and 8 threads: oracle run ") +
                                               (same_oracle ? "identical" : "differ") + ", model run " +
                                               (same_model ? "identical" : "differ")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "assignment optimality", kAssignBudget, ac1},
      {2, "full-search equivalence", kFullSearchBudget, ac2},
      {3, "ball cardinalities", kBallBudget, ac3},
      {4, "perfect-oracle recovery", kPerfectOracleBudget, ac4},
      {5, "noise monotonicity", kNoiseBudget, ac5},
      {6, "binary terms help", kBinaryBudget, ac6},
      {7, "iteration helps", kRoundsBudget, ac7},
      {8, "gradient correctness", kGradBudget, ac8},
      {9, "end-to-end learning", kTrainBudget, ac9},
      {10, "structural facts", kFactsBudget, ac10},
      {11, "determinism", kDeterminismBudget, ac11},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : all) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("AC%-2d %s  %s: %s; %.2f s (budget %.0f s%s)\n", c.id, pass ? "PASS" : "FAIL", c.name.c_str(),
                o.detail.c_str(), secs, c.budget, in_time ? "" : ", exceeded");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}

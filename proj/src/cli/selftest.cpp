#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "jigsolve/assign.hpp"
#include "jigsolve/cli.hpp"
#include "jigsolve/scorer.hpp"
#include "jigsolve/search.hpp"

namespace jigsolve::cli {

namespace {

struct Check {
  std::string name;
  std::string tolerance;
  std::function<std::string()> run;  // empty string on success
};

// Exhaustive minimum with the lexicographically smallest argmin.
AssignmentResult brute_assignment(const Matrix& c) {
  const int n = static_cast<int>(c.rows());
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  AssignmentResult best{Configuration(perm), 0.0};
  best.cost = INFINITY;
  do {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += c(static_cast<std::size_t>(i), static_cast<std::size_t>(perm[static_cast<std::size_t>(i)]));
    if (s < best.cost) best = {Configuration(perm), s};
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::string check_assignment(bool mutate) {
  Rng rng(20240601);
  const auto tie = mutate ? detail::TieBreak::kLexLargest : detail::TieBreak::kLexSmallest;
  for (int n = 1; n <= 5; ++n) {
    for (int trial = 0; trial < 400; ++trial) {
      // Every other matrix holds small integers so optimal ties are common.
      const bool ties = trial % 2 == 0;
      Matrix c(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
      for (std::size_t i = 0; i < c.rows(); ++i)
        for (std::size_t j = 0; j < c.cols(); ++j)
          c(i, j) = ties ? static_cast<double>(rng.uniform_int(0, 2)) : rng.uniform(0.0, 10.0);
      const auto got = detail::min_cost_assignment(c, tie);
      const auto want = brute_assignment(c);
      if (std::abs(got.cost - want.cost) > 1e-9 * std::max(1.0, std::abs(want.cost)) || got.config != want.config) {
        return "n=" + std::to_string(n) + " trial " + std::to_string(trial) + ": got " + got.config.to_string() +
               ", expected " + want.config.to_string();
      }
    }
  }
  return {};
}

std::string check_ball_counts() {
  for (int n = 1; n <= 7; ++n) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::uint64_t> by_distance(static_cast<std::size_t>(n) + 1, 0);
    do {
      int d = 0;
      for (int i = 0; i < n; ++i) d += perm[static_cast<std::size_t>(i)] != i;
      ++by_distance[static_cast<std::size_t>(d)];
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::uint64_t filtered = 0;
    for (int r = 0; r <= n; ++r) {
      filtered += by_distance[static_cast<std::size_t>(r)];
      const auto enumerated = enumerate_hamming_ball(Configuration::identity(n), r).size();
      if (enumerated != filtered || hamming_ball_size(n, r) != filtered) {
        return "n=" + std::to_string(n) + " r=" + std::to_string(r) + ": enumerated " + std::to_string(enumerated) +
               ", formula " + std::to_string(hamming_ball_size(n, r)) + ", filtered " + std::to_string(filtered);
      }
    }
  }
  if (hamming_ball_size(9, 3) != 205) return "n=9 r=3 is not 205";
  return {};
}

std::string check_gradients() {
  Rng rng(77);
  constexpr double kStep = 1e-5;
  constexpr double kFloor = 1e-6;
  for (const GridShape& shape : {GridShape{2, 2}, GridShape{3, 3}}) {
    const int n = shape.size();
    const int d = 5;
    for (int trial = 0; trial < 3; ++trial) {
      LinearScorer model(shape, d, FeatureRecipe::k2d);
      for (auto& w : model.params()) w = rng.uniform(-0.5, 0.5);
      Matrix f(static_cast<std::size_t>(n), static_cast<std::size_t>(d));
      for (std::size_t i = 0; i < f.rows(); ++i)
        for (std::size_t j = 0; j < f.cols(); ++j) f(i, j) = rng.uniform(-1.0, 1.0);
      const Configuration truth = random_permutation(n, rng);
      const auto analytic = loss_and_grad(model, f, truth).grad;
      auto params = model.params();
      for (int k = 0; k < 60; ++k) {
        const auto idx = static_cast<std::size_t>(rng.uniform_below(params.size()));
        const double saved = params[idx];
        params[idx] = saved + kStep;
        const double up = loss_and_grad(model, f, truth).loss;
        params[idx] = saved - kStep;
        const double down = loss_and_grad(model, f, truth).loss;
        params[idx] = saved;
        const double numeric = (up - down) / (2 * kStep);
        const double rel = std::abs(numeric - analytic[idx]) / std::max({std::abs(numeric), std::abs(analytic[idx]), kFloor});
        if (rel > 1e-4) {
          return shape.to_string() + " param " + std::to_string(idx) + ": analytic " + std::to_string(analytic[idx]) +
                 ", numeric " + std::to_string(numeric);
        }
      }
    }
  }
  return {};
}

std::string check_full_search() {
  Rng rng(4242);
  const GridShape shape{2, 2};
  SolverOptions opts;
  opts.radius = shape.size();
  for (int trial = 0; trial < 200; ++trial) {
    Matrix m(4, 4);
    for (std::size_t i = 0; i < 4; ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < 4; ++j) sum += m(i, j) = rng.uniform(0.01, 1.0);
      for (std::size_t j = 0; j < 4; ++j) m(i, j) /= sum;
    }
    const UnaryMatrix u(m);
    BinaryTable v(4);
    for (int p = 0; p < 4; ++p)
      for (int q = 0; q < 4; ++q) {
        if (p == q) continue;
        std::array<double, kNumRelClasses> row{};
        double sum = 0.0;
        for (auto& x : row) sum += x = rng.uniform(0.01, 1.0);
        for (auto& x : row) x /= sum;
        v.set(p, q, row);
      }
    const auto got = predict(u, &v, shape, opts).config;
    const auto want = brute_force_argmin(u, &v, shape);
    if (got != want) return "trial " + std::to_string(trial) + ": got " + got.to_string() + ", expected " + want.to_string();
  }
  return {};
}

std::string check_perfect_oracle() {
  for (const GridShape& shape : {GridShape{3, 3}, GridShape{2, 2, 2}}) {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
      PuzzleInstance p = make_truth_only_puzzle(shape, rng);
      if (p.truth.is_identity()) continue;
      OracleScorer oracle(0.0, static_cast<std::uint64_t>(trial));
      const auto trace = solve_iterative(oracle, p, SolverOptions{});
      if (!trace.final_truth.is_identity() || trace.rounds_used != 2) {
        return shape.to_string() + " trial " + std::to_string(trial) + ": " + std::to_string(trace.rounds_used) +
               " rounds, final " + trace.final_truth.to_string();
      }
    }
  }
  return {};
}

}  // namespace

int run_selftest(const SelftestOptions& opts, std::ostream& out) {
  const std::vector<Check> checks = {
      {"assignment optimality, n <= 5, 2000 matrices vs exhaustive search", "cost 1e-9 relative, assign array exact",
       [&] { return check_assignment(opts.mutate_tie_break); }},
      {"hamming ball cardinality, n <= 7, all radii", "exact", check_ball_counts},
      {"loss gradient vs central differences (step 1e-5), 2x2 and 3x3", "relative 1e-4, denominator floor 1e-6",
       check_gradients},
      {"full-radius predict vs brute force, 2x2, 200 instances", "exact configuration", check_full_search},
      {"noise-free oracle solves in two rounds, 3x3 and 2x2x2", "exact", check_perfect_oracle},
  };
  std::vector<std::string> failures;
  for (const auto& check : checks) {
    const std::string problem = check.run();
    out << (problem.empty() ? "[pass] " : "[FAIL] ") << check.name << " (tolerance: " << check.tolerance << ")\n";
    if (!problem.empty()) {
      out << "       " << problem << '\n';
      failures.push_back(check.name);
    }
  }
  out << "selftest: " << checks.size() - failures.size() << "/" << checks.size() << " checks passed\n";
  for (const auto& f : failures) out << "failed: " << f << '\n';
  return failures.empty() ? kExitOk : kExitSelftest;
}

}  // namespace jigsolve::cli

#include <doctest.h>

#include <cmath>

#include "jigsolve/assign.hpp"
#include "jigsolve/errors.hpp"
#include "oracles.hpp"

using namespace jigsolve;

TEST_CASE("small assignments") {
  const auto one = min_cost_assignment(Matrix(1, 1, 4.5));
  CHECK(one.config == Configuration{0});
  CHECK(one.cost == 4.5);

  Matrix m(2, 2);
  m(0, 0) = -std::log(0.9);
  m(0, 1) = -std::log(0.1);
  m(1, 0) = -std::log(0.2);
  m(1, 1) = -std::log(0.8);
  const auto r = min_cost_assignment(m);
  CHECK(r.config == Configuration{0, 1});
  CHECK(r.cost == doctest::Approx(0.3285).epsilon(1e-4 / 0.3285));

  CHECK_THROWS_AS(min_cost_assignment(Matrix(2, 3)), DomainError);
  Matrix nan(2, 2);
  nan(1, 1) = NAN;
  CHECK_THROWS_AS(min_cost_assignment(nan), DomainError);
}

TEST_CASE("hungarian matches exhaustive search, ties included") {
  Rng rng(21);
  for (int n = 1; n <= 6; ++n) {
    for (int t = 0; t < 150; ++t) {
      Matrix m(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
      const int mode = t % 3;
      for (auto& x : m.data()) {
        if (mode == 0) x = rng.uniform(-5, 5);
        else if (mode == 1) x = rng.uniform_int(0, 2);
        else x = std::log(1.0 + rng.uniform_int(0, 3));
      }
      const auto got = min_cost_assignment(m);
      // Sums of logs can tie mathematically yet differ in the last bit.
      const auto [cost, arr] = oracle::assignment(m, mode == 2 ? 1e-12 : 0.0);
      REQUIRE(got.cost == doctest::Approx(cost).epsilon(1e-12));
      REQUIRE(oracle::values(got.config) == arr);
    }
  }
}

TEST_CASE("the wrong tie-break is observable") {
  const Matrix zeros(3, 3, 0.0);
  CHECK(min_cost_assignment(zeros).config.is_identity());
  CHECK(detail::min_cost_assignment(zeros, detail::TieBreak::kLexLargest).config == Configuration{2, 1, 0});
}

TEST_CASE("unary argmin") {
  const Configuration c{3, 0, 2, 1};
  const auto hot = unary_argmin(UnaryMatrix::one_hot(c));
  CHECK(hot.config == c);
  CHECK(hot.cost == 0.0);
  CHECK(unary_argmin(UnaryMatrix::uniform(6)).config.is_identity());

  Rng rng(22);
  for (int n = 2; n <= 6; ++n)
    for (int t = 0; t < 30; ++t) {
      const auto u = oracle::random_unary(n, rng);
      const auto r = unary_argmin(u);
      CHECK(oracle::values(r.config) == oracle::argmin(u, nullptr, 1));
      CHECK(r.cost == doctest::Approx(unary_cost(u, r.config)).epsilon(1e-12));
    }
}

TEST_CASE("adding a constant to a row keeps the argmin") {
  Rng rng(23);
  for (int t = 0; t < 200; ++t) {
    const int n = rng.uniform_int(2, 6);
    Matrix m(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    for (auto& x : m.data()) x = rng.uniform(0, 10);
    const auto before = min_cost_assignment(m);
    const auto row = static_cast<std::size_t>(rng.uniform_int(0, n - 1));
    for (double& x : m.row(row)) x += 3.25;
    const auto after = min_cost_assignment(m);
    CHECK(after.config == before.config);
    CHECK(oracle::values(after.config) == oracle::assignment(m).second);
  }
}

TEST_CASE("assignment is deterministic") {
  Rng rng(24);
  Matrix m(9, 9);
  for (auto& x : m.data()) x = rng.uniform_int(0, 3);
  const auto a = min_cost_assignment(m), b = min_cost_assignment(m);
  CHECK(a.config == b.config);
  CHECK(a.cost == b.cost);
}

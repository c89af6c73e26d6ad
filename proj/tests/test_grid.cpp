#include <doctest.h>

#include <map>
#include <set>

#include "jigsolve/errors.hpp"
#include "jigsolve/grid.hpp"
#include "oracles.hpp"

using namespace jigsolve;

TEST_CASE("grid shapes parse and count cells") {
  CHECK(GridShape::parse("3x3").size() == 9);
  CHECK(GridShape::parse("2x3").extents() == std::vector<int>{2, 3});
  CHECK(GridShape::parse("3x3x3").size() == 27);
  CHECK(GridShape::parse("3x3x3").to_string() == "3x3x3");
  CHECK_THROWS(GridShape::parse("3"));
  CHECK_THROWS(GridShape::parse("0x3"));
  CHECK_THROWS(GridShape::parse("3xx3"));
  CHECK_THROWS(GridShape::parse("2x2x2x2"));
}

TEST_CASE("position ids are row-major") {
  const GridShape g3{3, 3};
  CHECK(position_to_id(std::vector<int>{0, 0}, g3) == 0);
  CHECK(position_to_id(std::vector<int>{1, 2}, g3) == 7);
  CHECK(position_to_id(std::vector<int>{1, 1, 1}, GridShape{3, 3, 3}) == 13);
  CHECK_THROWS_AS(position_to_id(std::vector<int>{3, 0}, g3), DomainError);
  CHECK_THROWS_AS(position_to_id(std::vector<int>{0, -1}, g3), DomainError);

  for (int w = 1; w <= 4; ++w)
    for (int h = 1; h <= 4; ++h)
      for (int z = 1; z <= 4; ++z) {
        const GridShape g{w, h, z};
        for (int id = 0; id < g.size(); ++id) REQUIRE(position_to_id(id_to_position(id, g), g) == id);
      }
}

TEST_CASE("relative types") {
  const GridShape g{3, 3};
  CHECK(relative_type(0, 1, g) == RelClass::kLeft);
  CHECK(relative_type(0, 4, g) == RelClass::kTopLeft);
  CHECK(relative_type(0, 2, g) == RelClass::kNone);
  CHECK(relative_type(1, 4, g) == RelClass::kTop);
  CHECK(static_cast<int>(RelClass::kNone) == 8);
  CHECK_THROWS_AS(relative_type(0, 0, g), DomainError);
  CHECK_THROWS_AS(relative_type(0, 1, GridShape{2, 2, 2}), UnsupportedError);

  for (const GridShape& s : {GridShape{3, 3}, GridShape{4, 2}, GridShape{1, 5}}) {
    for (int a = 0; a < s.size(); ++a)
      for (int b = 0; b < s.size(); ++b) {
        if (a == b) continue;
        const RelClass r = relative_type(a, b, s);
        CHECK(static_cast<int>(r) == oracle::relation(a, b, s.extent(0)));
        CHECK(relative_type(b, a, s) == mirror(r));
      }
  }
}

TEST_CASE("mirror classes") {
  CHECK(mirror(RelClass::kLeft) == RelClass::kRight);
  CHECK(mirror(RelClass::kTop) == RelClass::kBottom);
  CHECK(mirror(RelClass::kTopLeft) == RelClass::kBottomRight);
  CHECK(mirror(RelClass::kTopRight) == RelClass::kBottomLeft);
  CHECK(mirror(RelClass::kNone) == RelClass::kNone);
}

TEST_CASE("configurations must be permutations") {
  CHECK_NOTHROW(Configuration({2, 0, 1}));
  CHECK_THROWS_AS(Configuration({0, 0, 1}), DomainError);
  CHECK_THROWS_AS(Configuration({0, 3, 1}), DomainError);
  CHECK(Configuration::identity(4).is_identity());
  CHECK(Configuration({2, 0, 1}).inverse() == Configuration({1, 2, 0}));
}

TEST_CASE("hamming distance") {
  CHECK(hamming(Configuration{0, 1, 2}, Configuration{0, 1, 2}) == 0);
  CHECK(hamming(Configuration{0, 1, 2, 3}, Configuration{0, 3, 2, 1}) == 2);
  CHECK(hamming(Configuration{0, 1, 2}, Configuration{1, 2, 0}) == 3);
  CHECK_THROWS_AS(hamming(Configuration{0, 1}, Configuration{0, 1, 2}), DomainError);

  // Metric axioms over all of S4; distance 1 never occurs.
  std::vector<Configuration> s4;
  for (const auto& p : oracle::all_permutations(4)) s4.emplace_back(p);
  for (const auto& a : s4)
    for (const auto& b : s4) {
      const int d = hamming(a, b);
      REQUIRE(d == hamming(b, a));
      REQUIRE((d == 0) == (a == b));
      REQUIRE(d != 1);
      for (const auto& c : s4) REQUIRE(hamming(a, c) <= d + hamming(b, c));
    }
}

TEST_CASE("reorganize") {
  CHECK(reorganize(Configuration{2, 0, 1}, Configuration{2, 0, 1}) == Configuration{0, 1, 2});
  CHECK(reorganize(Configuration{1, 0}, Configuration{0, 1}) == Configuration{1, 0});
  CHECK(reorganize(Configuration{2, 0, 1}, Configuration{0, 2, 1}) == Configuration{2, 1, 0});
  CHECK_THROWS_AS(reorganize(Configuration{1, 0}, Configuration{0, 1, 2}), DomainError);

  Rng rng(3);
  for (int n : {4, 9, 27})
    for (int i = 0; i < 1000; ++i) {
      const Configuration t = random_permutation(n, rng);
      REQUIRE(reorganize(t, t).is_identity());
    }
}

TEST_CASE("random permutations are uniform and reproducible") {
  Rng one(1);
  CHECK(random_permutation(1, one) == Configuration{0});

  Rng rng(11);
  std::map<std::vector<int>, int> counts;
  constexpr int kDraws = 60000;
  for (int i = 0; i < kDraws; ++i) ++counts[oracle::values(random_permutation(3, rng))];
  CHECK(counts.size() == 6);
  for (const auto& [p, c] : counts) CHECK(std::abs(c / double(kDraws) - 1.0 / 6) < 0.01);

  Rng a(99), b(99);
  for (int i = 0; i < 50; ++i) REQUIRE(random_permutation(9, a) == random_permutation(9, b));
}

TEST_CASE("combinatorics") {
  const std::vector<std::uint64_t> d{1, 0, 1, 2, 9, 44, 265, 1854};
  for (int k = 0; k < static_cast<int>(d.size()); ++k) CHECK(derangements(k) == d[static_cast<std::size_t>(k)]);
  CHECK(binomial(9, 3) == 84);
  CHECK(hamming_ball_size(9, 3) == 205);
  CHECK(hamming_ball_size(4, 2) == 7);
  CHECK(factorial_decimal(9) == "362880");
  CHECK(factorial_decimal(27) == "10888869450418352160768000000");
  CHECK(factorial_approx(27) == doctest::Approx(1.0888869450418352e28).epsilon(1e-12));
}

TEST_CASE("hamming ball enumeration") {
  const Configuration c{2, 0, 3, 1};
  const auto r0 = enumerate_hamming_ball(c, 0);
  REQUIRE(r0.size() == 1);
  CHECK(r0[0] == c);
  CHECK(enumerate_hamming_ball(Configuration::identity(4), 2).size() == 7);
  CHECK(enumerate_hamming_ball(Configuration::identity(9), 3).size() == 205);
  CHECK_THROWS(enumerate_hamming_ball(c, 5));

  // Exhaustive filtering of S_n around a non-identity center, all radii.
  Rng rng(8);
  for (int n = 1; n <= 7; ++n) {
    const Configuration center = random_permutation(n, rng);
    const auto all = oracle::all_permutations(n);
    for (int r = 0; r <= n; ++r) {
      std::set<std::vector<int>> expected;
      for (const auto& p : all)
        if (hamming(Configuration(p), center) <= r) expected.insert(p);
      const auto ball = enumerate_hamming_ball(center, r);
      std::set<std::vector<int>> got;
      for (const auto& p : ball) got.insert(oracle::values(p));
      REQUIRE(got.size() == ball.size());
      REQUIRE(got == expected);
      REQUIRE(ball.front() == center);
      REQUIRE(ball.size() == hamming_ball_size(n, r));
      // Non-decreasing distance from the center.
      for (std::size_t i = 1; i < ball.size(); ++i) REQUIRE(hamming(ball[i - 1], center) <= hamming(ball[i], center));
    }
  }
}

TEST_CASE("hamming ball visitor can stop early") {
  int seen = 0;
  const auto visited = for_each_in_hamming_ball(Configuration::identity(5), 3, [&](std::span<const int>, int) {
    return ++seen < 10;
  });
  CHECK(visited == 10);
}

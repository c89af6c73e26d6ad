#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jigsolve/rng.hpp"

namespace jigsolve {

// Cell counts per axis: (W, H) for 2D puzzles, (W, H, Z) for 3D.
class GridShape {
 public:
  GridShape() = default;
  explicit GridShape(std::vector<int> extents);
  GridShape(std::initializer_list<int> extents) : GridShape(std::vector<int>(extents)) {}

  // Parses "3x3" or "2x2x2".
  static GridShape parse(std::string_view text);

  const std::vector<int>& extents() const { return extents_; }
  int extent(std::size_t axis) const { return extents_.at(axis); }
  std::size_t rank() const { return extents_.size(); }
  bool is_2d() const { return extents_.size() == 2; }
  int size() const { return n_; }

  std::string to_string() const;

  bool operator==(const GridShape&) const = default;

 private:
  std::vector<int> extents_;
  int n_ = 0;
};

// Row-major original-position id: x + y*W (+ z*W*H).
using PositionId = int;

// Permutation over slots: assign[s] is the original-position id of the patch
// currently in slot s. The solved state is the identity.
class Configuration {
 public:
  Configuration() = default;
  // Throws DomainError unless `assign` is a permutation of 0..n-1.
  explicit Configuration(std::vector<int> assign);
  Configuration(std::initializer_list<int> assign) : Configuration(std::vector<int>(assign)) {}

  static Configuration identity(int n);

  int size() const { return static_cast<int>(assign_.size()); }
  int operator[](int slot) const { return assign_[static_cast<std::size_t>(slot)]; }
  std::span<const int> values() const { return assign_; }
  bool is_identity() const;

  // Slot currently holding original id `id`.
  Configuration inverse() const;

  std::string to_string() const;

  bool operator==(const Configuration&) const = default;
  auto operator<=>(const Configuration&) const = default;

 private:
  std::vector<int> assign_;
};

bool is_permutation_of_iota(std::span<const int> values);

// Relation of one cell to another in the 8-neighbourhood. NONE for anything
// not immediately adjacent. The integer values are part of the model format.
enum class RelClass : int {
  kTop = 0,
  kBottom = 1,
  kLeft = 2,
  kRight = 3,
  kTopLeft = 4,
  kTopRight = 5,
  kBottomLeft = 6,
  kBottomRight = 7,
  kNone = 8,
};

inline constexpr int kNumRelClasses = 9;

const char* rel_class_name(RelClass r);
RelClass mirror(RelClass r);

PositionId position_to_id(std::span<const int> coords, const GridShape& shape);
std::vector<int> id_to_position(PositionId id, const GridShape& shape);

// Relation of cell `a` to cell `b`: kTop means a sits one row above b.
// 2D only; a != b.
RelClass relative_type(PositionId a, PositionId b, const GridShape& shape);

// All-pairs lookup table, rel[a * n + b]; the diagonal holds kNone.
std::vector<RelClass> relation_table(const GridShape& shape);

int hamming(const Configuration& a, const Configuration& b);

// Truth of the puzzle after moving the patch in slot s to slot prediction[s].
Configuration reorganize(const Configuration& truth, const Configuration& prediction);

// Uniform over S_n (Fisher-Yates).
Configuration random_permutation(int n, Rng& rng);

// Number of derangements of k items.
std::uint64_t derangements(int k);
std::uint64_t binomial(int n, int k);
// 1 + sum_{k=2..radius} C(n,k) D_k.
std::uint64_t hamming_ball_size(int n, int radius);

// n! as an exact decimal string (27! does not fit in 64 bits).
std::string factorial_decimal(int n);
double factorial_approx(int n);

// Visits every permutation within Hamming distance `radius` of `center`, each
// once: center first, then by distance k = 2..radius, by changed-slot subset
// in lexicographic order, then by derangement of the subset's values in
// lexicographic order. The visitor receives the candidate and its distance to
// the center and returns false to stop. Returns the number of candidates
// visited.
std::uint64_t for_each_in_hamming_ball(
    const Configuration& center, int radius,
    const std::function<bool(std::span<const int> candidate, int distance)>& visit);

std::vector<Configuration> enumerate_hamming_ball(const Configuration& center, int radius);

}  // namespace jigsolve

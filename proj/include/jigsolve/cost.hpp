#pragma once

#include <array>
#include <span>
#include <vector>

#include "jigsolve/grid.hpp"
#include "jigsolve/matrix.hpp"

namespace jigsolve {

// Probabilities are clamped to this before taking logarithms so that costs of
// one-hot tables stay finite.
inline constexpr double kProbabilityFloor = 1e-12;

// Tolerance on row sums of probability tables.
inline constexpr double kRowSumTolerance = 1e-9;

double neg_log(double p);

// Row-stochastic n x n table: at(slot, orig) is the belief that the patch in
// `slot` came from original position `orig`.
class UnaryMatrix {
 public:
  UnaryMatrix() = default;
  // Validates: square, finite, entries in [0,1], rows sum to 1.
  explicit UnaryMatrix(Matrix probs);

  static UnaryMatrix uniform(int n);
  // One-hot rows: slot s points at config[s].
  static UnaryMatrix one_hot(const Configuration& config);

  int size() const { return static_cast<int>(probs_.rows()); }
  double at(int slot, int orig) const { return probs_(slot, orig); }
  std::span<const double> row(int slot) const { return probs_.row(slot); }
  const Matrix& matrix() const { return probs_; }

 private:
  Matrix probs_;
};

// For each ordered slot pair (p, q), p != q, a distribution over the nine
// relation classes of p's patch relative to q's patch.
class BinaryTable {
 public:
  using Dist = std::array<double, kNumRelClasses>;

  BinaryTable() = default;
  explicit BinaryTable(int n);  // all pairs uniform

  static BinaryTable one_hot(const Configuration& config, const GridShape& shape);

  int size() const { return n_; }
  const Dist& at(int p, int q) const { return dist_[index(p, q)]; }
  // Replaces one pair's distribution; validates it.
  void set(int p, int q, const Dist& d);

 private:
  std::size_t index(int p, int q) const { return static_cast<std::size_t>(p) * n_ + q; }

  int n_ = 0;
  std::vector<Dist> dist_;
};

struct CostBreakdown {
  double unary = 0.0;
  double binary = 0.0;
  double total = 0.0;
};

// Softmax of every row with max subtraction.
UnaryMatrix row_softmax(const Matrix& logits);
std::vector<double> softmax(std::span<const double> logits);
BinaryTable::Dist softmax9(std::span<const double> logits);

double unary_cost(const UnaryMatrix& u, const Configuration& c);
double binary_cost(const BinaryTable& v, const Configuration& c, const GridShape& shape);
// `v` may be null, in which case the binary part is zero.
CostBreakdown total_cost(const UnaryMatrix& u, const BinaryTable* v, const Configuration& c,
                         const GridShape& shape);

// Per-column |sum - 1|. Diagnostic only.
std::vector<double> column_sum_deviation(const UnaryMatrix& u);

// Precomputed negative log tables for evaluating many candidate
// configurations against the same (U, V). evaluate() sums in exactly the order
// unary_cost/binary_cost do, so results are bit-identical to total_cost.
class CostEvaluator {
 public:
  CostEvaluator(const UnaryMatrix& u, const BinaryTable* v, const GridShape& shape);

  int size() const { return n_; }
  bool has_binary() const { return has_binary_; }

  double unary(std::span<const int> assign) const;
  double binary(std::span<const int> assign) const;
  CostBreakdown evaluate(std::span<const int> assign) const;

 private:
  int n_;
  bool has_binary_;
  std::vector<double> unary_;  // n x n
  std::vector<double> pair_;   // [p][q][a][b]
};

}  // namespace jigsolve

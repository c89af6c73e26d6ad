#pragma once

#include "jigsolve/cost.hpp"
#include "jigsolve/grid.hpp"
#include "jigsolve/matrix.hpp"

namespace jigsolve {

struct AssignmentResult {
  Configuration config;
  double cost = 0.0;  // sum over slots of costs(slot, config[slot])
};

// Minimum-cost perfect matching of rows (slots) to columns (original ids) by
// the Hungarian method. Among optimal matchings the lexicographically
// smallest assign array is returned.
AssignmentResult min_cost_assignment(const Matrix& costs);

// min_cost_assignment over -ln U (floored). cost equals unary_cost(U, config).
AssignmentResult unary_argmin(const UnaryMatrix& u);

namespace detail {

enum class TieBreak {
  kLexSmallest,
  kLexLargest,  // deliberately wrong; only used to prove the self-test catches it
};

AssignmentResult min_cost_assignment(const Matrix& costs, TieBreak tie_break);

}  // namespace detail

}  // namespace jigsolve

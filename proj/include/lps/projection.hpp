#ifndef LPS_PROJECTION_HPP_
#define LPS_PROJECTION_HPP_

#include "lps/support.hpp"
#include "lps/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace lps {

enum class PruningKind { irregular, column, filter };
enum class GroupAxis { column, filter };

// oracle_project also handles the binary mask set, which is not a pruning
// strategy a plan can select
enum class ProjectionKind { irregular, column, filter, mask };

const char* to_string(PruningKind k);
PruningKind pruning_kind_from_string(const std::string& s);

// Exact Euclidean projections onto the sparsity constraint sets used by the
// solver. Each projection returns both the projected values and the set of
// coordinates it allocated (`kept`), which the partition ledger records as
// the task's support. Ties on equal keys are broken toward the lower flat
// (column-major) index so results are reproducible bit for bit.
struct Projected {
  Matrix values;
  BoolMatrix kept;
};

namespace detail {

struct Ranked {
  double key;
  Index idx;
};

// sort descending by key, ascending by index on ties
inline void rank_sort(std::vector<Ranked>& v) {
  std::sort(v.begin(), v.end(), [](const Ranked& a, const Ranked& b) {
    if (a.key != b.key) return a.key > b.key;
    return a.idx < b.idx;
  });
}

}  // namespace detail

// Keeps the `alpha` entries of Z with largest absolute value among the
// eligible coordinates and zeroes everything else.
Projected project_irregular(const Matrix& Z, long alpha, const BoolMatrix& eligible);

// Keeps the `alpha` eligible groups (columns, or rows for the filter axis)
// with largest l2 norm; all other groups and all ineligible groups go to zero.
Projected project_structured(const Matrix& Z, long alpha, GroupAxis axis,
                             const std::vector<Index>& eligible_groups);

// Binary mask projection: the `beta` largest eligible entries of Z map to 1,
// the rest to 0. Output has exactly beta ones, all inside `eligible`.
Projected project_mask_binary(const Matrix& Z, long beta, const BoolMatrix& eligible);

// Groups whose every coordinate is free; partially used groups are not
// available to a new task under structured pruning.
std::vector<Index> fully_eligible_groups(const BoolMatrix& eligible, GroupAxis axis);

// Exhaustive reference projector for small instances (<= 20 eligible
// coordinates or groups). Enumerates every feasible support / binary pattern
// and returns a true Euclidean minimizer; used as the test oracle.
Matrix oracle_project(const Matrix& Z, long budget, ProjectionKind kind, const BoolMatrix& eligible);

inline double sq_distance(const Matrix& a, const Matrix& b) { return (a - b).squaredNorm(); }

// Expression-friendly wrappers.
template <class D>
Projected project_irregular(const Eigen::MatrixBase<D>& Z, long alpha, const BoolMatrix& eligible) {
  return project_irregular(Matrix(Z), alpha, eligible);
}
template <class D>
Projected project_mask_binary(const Eigen::MatrixBase<D>& Z, long beta, const BoolMatrix& eligible) {
  return project_mask_binary(Matrix(Z), beta, eligible);
}

// Per-layer integer budgets resolved from the configured percentages.
// alpha counts coordinates for irregular pruning and groups for structured
// pruning; beta counts mask ones inside the past support.
struct SparsityBudget {
  std::vector<long> alpha;
  std::vector<long> beta;  // empty when the task trains no mask
};

// Percentages are relative to the layer's full size (alpha) and to the past
// support size (beta); the results are clamped to what is actually eligible
// and floored at 1 whenever the percentage is positive and anything is
// eligible at all.
SparsityBudget resolve_budgets(PruningKind kind, double alpha_pct, double beta_pct,
                               const SupportSet& free_support, const SupportSet& past_support,
                               bool with_mask);

}  // namespace lps

#endif  // LPS_PROJECTION_HPP_

#ifndef LPS_PARTITION_HPP_
#define LPS_PARTITION_HPP_

#include "lps/support.hpp"
#include "lps/types.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace lps {

// One task's committed parameters. Weights live only on weight_support,
// masks are binary with ones exactly on mask_support, and the two supports
// never intersect: the mask borrows frozen past weights, the weights occupy
// previously free capacity.
struct TaskSlice {
  int task_id = 0;
  std::vector<Matrix> weights;
  std::vector<Matrix> masks;  // empty for the first task
  Matrix head;
  Vector head_bias;
  SupportSet weight_support;
  SupportSet mask_support;
};

// Mutable working state for the task currently being trained; collapses into
// an immutable TaskSlice at finalize time. Weights live on free_support,
// masks (real-relaxed during optimization) on past_support; both supports are
// snapshots taken when the task starts.
struct TaskTrainState {
  int task_id = 1;
  std::vector<Matrix> weights;
  std::vector<Matrix> masks;  // empty when the task trains no mask
  Matrix head;
  Vector head_bias;
  SupportSet free_support;
  SupportSet past_support;
};

// Append-only record of every committed task. Committed slices are never
// edited, so anything derived from a prefix of the slice list is immutable
// for the rest of the run; that is the no-forgetting mechanism.
struct PartitionLedger {
  std::vector<Matrix> accumulated;  // coordinate-wise sum of committed weights
  SupportSet used_support;
  SupportSet reserved;  // capacity withheld from every task (capacity studies)
  std::vector<TaskSlice> slices;
  long total_capacity = 0;

  std::size_t layer_count() const { return accumulated.size(); }
  long committed_count() const { return static_cast<long>(slices.size()); }
};

PartitionLedger make_ledger(const std::vector<Matrix>& zero_weights);

// Withholds (1 - fraction) of each layer's coordinates from all tasks, drawn
// by seeded shuffle. Must run before any commit.
void reserve_capacity(PartitionLedger& ledger, double fraction, std::uint64_t seed);

// Sum of committed slice weights for tasks with id < task_id, added in commit
// order. A pure function of the slice prefix: later commits cannot change it.
std::vector<Matrix> prefix_accumulated(const PartitionLedger& ledger, int task_id);

// W + M .* (past accumulated), the weights the task is evaluated with.
// Entries outside weight_support and mask_support come out exactly zero.
std::vector<Matrix> effective_weights(const PartitionLedger& ledger, const TaskSlice& slice);

// Validates every slice invariant and the disjointness/containment relations
// against the ledger, then appends. Throws (ledger untouched) on violation.
void commit_task(PartitionLedger& ledger, const TaskSlice& slice);

// Coordinates no task owns and no reservation withholds.
SupportSet free_support(const PartitionLedger& ledger);

struct InvariantReport {
  bool pass = true;
  std::vector<std::string> failures;
};

// Recomputes every ledger invariant from the raw matrices: pairwise support
// disjointness, accumulation correctness, support bookkeeping, per-slice
// feasibility, and reservation separation.
InvariantReport verify_invariants(const PartitionLedger& ledger);

}  // namespace lps

#endif  // LPS_PARTITION_HPP_

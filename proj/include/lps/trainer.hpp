#ifndef LPS_TRAINER_HPP_
#define LPS_TRAINER_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lps/admm.hpp"
#include "lps/network.hpp"
#include "lps/partition.hpp"
#include "lps/projection.hpp"
#include "lps/tasks.hpp"
#include "lps/types.hpp"

namespace lps {

// Per-task training schedule. Sparsity arrives as percentages and is
// resolved into integer per-layer budgets against the supports the task
// actually sees when it starts.
struct PhasePlan {
  long warmup_epochs = 5;
  long admm_epochs = 15;
  long final_epochs = 5;
  long schedule_intervals = 3;
  PruningKind pruning_kind = PruningKind::irregular;
  double alpha_pct = 10.0;  // weight budget, percent of each layer's size
  double beta_pct = 90.0;   // mask budget, percent of the past support
  double learning_rate = 1e-3;
  Index batch_size = 128;
  bool prune_last_task = true;

  void validate() const;
};

struct EvalRecord {
  int task_id = 0;
  double top1_accuracy = 0.0;  // exactly correct / sample_count
  long sample_count = 0;
  std::uint64_t logits_digest = 0;  // of all test logits; the no-forgetting witness
};

struct EpochRecord {
  int task_id = 0;
  std::string phase;  // "warmup" | "final"
  long epoch = 0;
  double mean_loss = 0.0;
};

// Everything produced while training one task.
struct TaskRunRecord {
  EvalRecord eval;  // the task's own test split, right after commit
  std::vector<EpochRecord> epochs;
  std::vector<AdmmResidualRecord> residuals;
};

// Owns the committed state of one continual-learning run: the partition
// ledger plus the shared feature biases (trained by the first task, frozen
// afterwards). Heads and head biases live in the slices.
struct Engine {
  NetworkSpec spec;
  PartitionLedger ledger;
  std::vector<Vector> feature_biases;
  std::uint64_t root_seed = 1;
};

// capacity_fraction < 1 withholds the complement from every task (capacity
// studies); the reservation is seeded and fixed for the whole run.
Engine make_engine(const NetworkSpec& spec, std::uint64_t seed, double capacity_fraction = 1.0);

// Feature biases plus the given head bias in the last slot; frozen once any
// task has been committed.
BiasSet assemble_biases(const Engine& engine, const Vector& head_bias);

// Warm-up phase: fresh weights dense over the free support, mask fixed at 1
// on the past support (present but not trained), fresh head; plain Adam on
// the effective weights for warmup_epochs. Throws when a layer has no free
// capacity left. `with_mask` decides whether this task borrows past weights.
TaskTrainState warmup(Engine& engine, BiasSet& biases, const TaskDataset& data,
                      const PhasePlan& plan, bool with_mask,
                      std::vector<EpochRecord>* log = nullptr);

// Final phase: hard projection of W and M onto their constraint sets,
// supports recorded from the projections, then final_epochs of Adam that
// update only coordinates inside the recorded weight support (and the head);
// the mask is frozen after its projection. Returns the finished slice,
// ready for commit.
TaskSlice finalize(Engine& engine, TaskTrainState& task, BiasSet& biases, const TaskDataset& data,
                   const SparsityBudget& budgets, const PhasePlan& plan,
                   std::vector<EpochRecord>* log = nullptr);

// The whole three-phase protocol for the next task in sequence:
// warmup -> run_admm_phase -> finalize -> commit. `prune` = false lifts the
// weight budget to the full free support (the no-prune last-task mode);
// masks and their budget are unaffected by it. Any phase error aborts
// before the ledger is touched.
TaskRunRecord train_task(Engine& engine, const TaskDataset& data, const PhasePlan& plan,
                         bool prune = true);

// Pure read of a committed task: effective weights + that task's head and
// head bias + the frozen feature biases.
EvalRecord evaluate(const Engine& engine, int task_id, const Matrix& test_x,
                    const Eigen::VectorXi& test_y);

struct SequenceResult {
  std::vector<TaskRunRecord> tasks;
  // matrix[t] holds evaluations of tasks 1..t+1 after task t+1 committed;
  // constant columns are the no-forgetting signature
  std::vector<std::vector<EvalRecord>> matrix;
  double average_accuracy = 0.0;  // mean over the final row
};

// Trains every dataset in order. `on_task` (optional) fires after each
// task's commit with the run record and the fresh evaluation row, so a
// caller can flush partial results before the next task starts.
SequenceResult run_sequence(
    Engine& engine, const std::vector<TaskDataset>& datasets, const PhasePlan& plan,
    const std::function<void(const TaskRunRecord&, const std::vector<EvalRecord>&)>& on_task = {});

}  // namespace lps

#endif  // LPS_TRAINER_HPP_

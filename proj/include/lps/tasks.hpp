#ifndef LPS_TASKS_HPP_
#define LPS_TASKS_HPP_

#include "lps/types.hpp"

#include <cstdint>
#include <vector>

namespace lps {

// One task's data. Inputs are row-per-sample, scaled to [0,1]; labels are
// task-local indices 0..class_count-1 (multi-head convention). For permuted
// suites, `permutation` records the column map so task inputs can be
// reproduced from the base images.
struct TaskDataset {
  int task_id = 0;
  int class_count = 0;
  Matrix train_x;
  Eigen::VectorXi train_y;
  Matrix test_x;
  Eigen::VectorXi test_y;
  std::vector<Index> permutation;
};

struct Batch {
  Matrix x;
  Eigen::VectorXi y;
};

// Seeded Gaussian-cluster tasks. `similarity` interpolates each task's class
// centers between an independent layout (0.0) and one layout shared by every
// task (1.0). Cluster spread is min-center-distance / 6, so classes are
// linearly separable by construction and the interesting variation comes
// from cross-task structure, not class difficulty.
std::vector<TaskDataset> make_blob_tasks(int n, Index input_dim, int class_count,
                                         Index train_per_task, Index test_per_task,
                                         std::uint64_t seed, double similarity);

// Task 1 is the base dataset under the identity permutation; tasks 2..n each
// apply one seeded pixel permutation to every image.
std::vector<TaskDataset> make_permuted_tasks(const TaskDataset& base, int n, std::uint64_t seed);

// Disjoint class groups drawn by seeded shuffle, labels remapped per task to
// 0..classes_per_task-1 in ascending original-class order.
std::vector<TaskDataset> make_split_tasks(const TaskDataset& base, int classes_per_task, int n,
                                          std::uint64_t seed);

enum class SuiteKind { blobs, permuted, split };

// One benchmark suite. Caps bound the per-task sample counts: blobs generates
// exactly that many samples (defaults 240/80 when a cap is zero); permuted and
// split draw a seeded stratified subsample of the digit corpus per task.
// `class_count` is the label count of each task; for split suites that is the
// number of corpus classes assigned to each task.
struct TaskSuiteConfig {
  SuiteKind kind = SuiteKind::blobs;
  int task_count = 3;
  std::uint64_t seed = 1;
  Index train_cap = 0;
  Index test_cap = 0;
  Index input_dim = 4;
  int class_count = 3;
  double blob_similarity = 0.5;  // blobs only

  void validate() const;
};

std::vector<TaskDataset> make_suite(const TaskSuiteConfig& config);

// Seeded epoch shuffle chunked into batches; the last partial batch is kept.
std::vector<std::vector<Index>> batch_indices(Index sample_count, Index batch_size,
                                              std::uint64_t seed, long epoch);

Batch gather(const Matrix& x, const Eigen::VectorXi& y, const std::vector<Index>& idx);

// Per-class proportional subsample (largest-remainder apportionment) of both
// splits. Caps <= 0 or >= the split size keep the split unchanged.
TaskDataset subsample_stratified(const TaskDataset& d, Index train_cap, Index test_cap,
                                 std::uint64_t seed);

}  // namespace lps

#endif  // LPS_TASKS_HPP_

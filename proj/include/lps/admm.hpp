#ifndef LPS_ADMM_HPP_
#define LPS_ADMM_HPP_

#include <cstdint>
#include <vector>

#include "lps/adam.hpp"
#include "lps/network.hpp"
#include "lps/partition.hpp"
#include "lps/projection.hpp"
#include "lps/tasks.hpp"
#include "lps/types.hpp"

namespace lps {

// Splitting state for the augmented objective
//   L(W, M) + sum_l rho_l/2 ||W_l - Z_l + U_l||_F^2
//           + sum_l tau_l/2 ||M_l - Y_l + K_l||_F^2
// with scaled duals U, K. Z is kept feasible for the weight sparsity set and
// Y for the exact-cardinality binary mask set; W and M themselves move
// freely on their supports between projections.
struct AdmmState {
  std::vector<Matrix> Z;
  std::vector<Matrix> U;
  std::vector<Matrix> Y;  // empty when the task trains no mask
  std::vector<Matrix> K;
  std::vector<double> rho;
  std::vector<double> tau;
  long outer_iteration = 0;
};

// Z starts as the projection of the warm-started weights (Y likewise for the
// mask), duals start at zero. initial_penalty must be positive.
AdmmState init_admm(const TaskTrainState& task, const SparsityBudget& budgets, PruningKind kind,
                    double initial_penalty);

// Raise every rho_l and tau_l to `value`. The schedule only ever increases
// the penalty, so lowering it is rejected as a caller bug.
void set_penalty(AdmmState& admm, double value);

// Staircase schedule: the penalty is multiplied by `factor` at `intervals`
// equally spaced points across `total_outer` iterations.
double penalty_schedule(long outer_iteration, long total_outer, double initial = 1e-3,
                        double factor = 10.0, long intervals = 3);

// Augmented loss and its gradients at the current primal point. Gradients
// land in `grads`: weight entries on free support (data term plus proximal
// pull toward Z - U), mask entries on past support (data term through the
// effective weights, chain factor = past weight value, plus pull toward
// Y - K), head and biases as in the plain loss. Entries outside the
// respective supports are exactly zero. `past` holds the accumulated
// committed weights per layer.
double proximal_loss_and_grads(const TaskTrainState& task, const std::vector<Matrix>& past,
                               const BiasSet& biases, const AdmmState& admm, const Matrix& batch,
                               const Eigen::VectorXi& labels, GradientSet& grads);

// Z_l <- project(W_l + U_l), Y_l <- project(M_l + K_l).
void update_auxiliary(AdmmState& admm, const TaskTrainState& task, const SparsityBudget& budgets,
                      PruningKind kind);

// U_l += W_l - Z_l, K_l += M_l - Y_l.
void update_duals(AdmmState& admm, const TaskTrainState& task);

// Per-outer-iteration trace. Residuals are Frobenius norms taken after the
// auxiliary and dual updates; `feasible` re-checks the iterate against the
// constraint sets rather than trusting the projections.
struct AdmmResidualRecord {
  long outer_iteration = 0;
  double rho = 0.0;
  double augmented_loss = 0.0;  // mean over the epoch's minibatches
  std::vector<double> weight_residual;
  std::vector<double> mask_residual;
  bool feasible = false;
};

struct AdmmPhaseResult {
  AdmmState state;
  std::vector<AdmmResidualRecord> residuals;
};

// One outer iteration = one primal epoch of Adam over minibatches of the
// augmented objective, then the auxiliary and dual updates. The penalty
// follows penalty_schedule across `epochs`. Throws if any layer budget is
// zero (nothing to train) or if the augmented loss goes non-finite.
AdmmPhaseResult run_admm_phase(TaskTrainState& task, const std::vector<Matrix>& past,
                               BiasSet& biases, const TaskDataset& data,
                               const SparsityBudget& budgets, PruningKind kind, long epochs,
                               Index batch_size, double learning_rate, long schedule_intervals,
                               std::uint64_t seed);

}  // namespace lps

#endif  // LPS_ADMM_HPP_

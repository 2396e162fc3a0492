#include "lps/admm.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lps {

namespace {

Matrix project_weight_layer(const Matrix& target, long alpha, PruningKind kind,
                            const BoolMatrix& free) {
  if (kind == PruningKind::irregular) return project_irregular(target, alpha, free).values;
  const GroupAxis axis = (kind == PruningKind::column) ? GroupAxis::column : GroupAxis::filter;
  return project_structured(target, alpha, axis, fully_eligible_groups(free, axis)).values;
}

void check_admm_shapes(const TaskTrainState& task, const std::vector<Matrix>& past,
                       const AdmmState& admm) {
  const std::size_t layers = task.weights.size();
  require(past.size() == layers, "admm: past weight layer count mismatch");
  require(admm.Z.size() == layers && admm.U.size() == layers,
          "admm: auxiliary layer count mismatch");
  require(admm.rho.size() == layers && admm.tau.size() == layers,
          "admm: penalty layer count mismatch");
  const bool with_mask = !task.masks.empty();
  require(task.masks.size() == (with_mask ? layers : 0), "admm: mask layer count mismatch");
  require(admm.Y.size() == task.masks.size() && admm.K.size() == task.masks.size(),
          "admm: mask auxiliary layer count mismatch");
}

long weight_support_size(const Matrix& Z, PruningKind kind) {
  if (kind == PruningKind::irregular) return (Z.array() != 0.0).count();
  long groups = 0;
  if (kind == PruningKind::column) {
    for (Index c = 0; c < Z.cols(); ++c)
      if ((Z.col(c).array() != 0.0).any()) ++groups;
  } else {
    for (Index r = 0; r < Z.rows(); ++r)
      if ((Z.row(r).array() != 0.0).any()) ++groups;
  }
  return groups;
}

bool iterate_feasible(const AdmmState& admm, const TaskTrainState& task,
                      const SparsityBudget& budgets, PruningKind kind) {
  for (std::size_t l = 0; l < admm.Z.size(); ++l) {
    const BoolMatrix& free = task.free_support.layers[l];
    if ((!free && admm.Z[l].array() != 0.0).any()) return false;
    if (weight_support_size(admm.Z[l], kind) > budgets.alpha[l]) return false;
  }
  for (std::size_t l = 0; l < admm.Y.size(); ++l) {
    const BoolMatrix& past = task.past_support.layers[l];
    const auto& y = admm.Y[l].array();
    if ((y != 0.0 && y != 1.0).any()) return false;
    if ((!past && y != 0.0).any()) return false;
    if (std::lround(admm.Y[l].sum()) != budgets.beta[l]) return false;
  }
  return true;
}

}  // namespace

AdmmState init_admm(const TaskTrainState& task, const SparsityBudget& budgets, PruningKind kind,
                    double initial_penalty) {
  require(initial_penalty > 0.0, "init_admm: penalty must be positive");
  const std::size_t layers = task.weights.size();
  require(budgets.alpha.size() == layers, "init_admm: alpha budget layer count mismatch");
  const bool with_mask = !task.masks.empty();
  require(!with_mask || budgets.beta.size() == layers,
          "init_admm: beta budget layer count mismatch");

  AdmmState admm;
  admm.rho.assign(layers, initial_penalty);
  admm.tau.assign(layers, initial_penalty);
  admm.Z.reserve(layers);
  admm.U.reserve(layers);
  for (std::size_t l = 0; l < layers; ++l) {
    admm.Z.push_back(project_weight_layer(task.weights[l], budgets.alpha[l], kind,
                                          task.free_support.layers[l]));
    admm.U.push_back(Matrix::Zero(task.weights[l].rows(), task.weights[l].cols()));
  }
  if (with_mask) {
    admm.Y.reserve(layers);
    admm.K.reserve(layers);
    for (std::size_t l = 0; l < layers; ++l) {
      admm.Y.push_back(
          project_mask_binary(task.masks[l], budgets.beta[l], task.past_support.layers[l]).values);
      admm.K.push_back(Matrix::Zero(task.masks[l].rows(), task.masks[l].cols()));
    }
  }
  return admm;
}

void set_penalty(AdmmState& admm, double value) {
  require(value > 0.0, "set_penalty: penalty must be positive");
  for (std::size_t l = 0; l < admm.rho.size(); ++l) {
    require(value >= admm.rho[l], "set_penalty: penalty may only increase");
    admm.rho[l] = value;
    admm.tau[l] = value;
  }
}

double penalty_schedule(long outer_iteration, long total_outer, double initial, double factor,
                        long intervals) {
  require(outer_iteration >= 0, "penalty_schedule: negative iteration");
  require(total_outer >= 1 && intervals >= 1, "penalty_schedule: empty schedule");
  require(initial > 0.0 && factor >= 1.0, "penalty_schedule: bad penalty parameters");
  long exponent = outer_iteration * intervals / total_outer;
  if (exponent > intervals) exponent = intervals;
  return initial * std::pow(factor, static_cast<double>(exponent));
}

double proximal_loss_and_grads(const TaskTrainState& task, const std::vector<Matrix>& past,
                               const BiasSet& biases, const AdmmState& admm, const Matrix& batch,
                               const Eigen::VectorXi& labels, GradientSet& grads) {
  check_admm_shapes(task, past, admm);
  const std::size_t layers = task.weights.size();
  const bool with_mask = !task.masks.empty();

  std::vector<Matrix> effective = task.weights;
  if (with_mask)
    for (std::size_t l = 0; l < layers; ++l)
      effective[l] += task.masks[l].cwiseProduct(past[l]);

  TrainableSet trainable;
  trainable.weights = with_mask ? set_union(task.free_support, task.past_support)
                                : task.free_support;
  trainable.feature_biases = !biases.frozen;

  double loss =
      loss_and_grads(effective, task.head, biases, batch, labels, trainable, grads);

  grads.masks.resize(with_mask ? layers : 0);
  for (std::size_t l = 0; l < layers; ++l) {
    const Matrix data_grad = grads.weights[l];
    if (with_mask) {
      // d(loss)/dM = d(loss)/dW_eff scaled by the borrowed weight values
      grads.masks[l] = keep_where(task.past_support.layers[l], data_grad.cwiseProduct(past[l])) +
                       admm.tau[l] * (task.masks[l] - admm.Y[l] + admm.K[l]);
      loss += 0.5 * admm.tau[l] * (task.masks[l] - admm.Y[l] + admm.K[l]).squaredNorm();
    }
    grads.weights[l] = keep_where(task.free_support.layers[l], data_grad) +
                       admm.rho[l] * (task.weights[l] - admm.Z[l] + admm.U[l]);
    loss += 0.5 * admm.rho[l] * (task.weights[l] - admm.Z[l] + admm.U[l]).squaredNorm();
  }
  return loss;
}

void update_auxiliary(AdmmState& admm, const TaskTrainState& task, const SparsityBudget& budgets,
                      PruningKind kind) {
  for (std::size_t l = 0; l < admm.Z.size(); ++l)
    admm.Z[l] = project_weight_layer(task.weights[l] + admm.U[l], budgets.alpha[l], kind,
                                     task.free_support.layers[l]);
  for (std::size_t l = 0; l < admm.Y.size(); ++l)
    admm.Y[l] = project_mask_binary(task.masks[l] + admm.K[l], budgets.beta[l],
                                    task.past_support.layers[l])
                    .values;
}

void update_duals(AdmmState& admm, const TaskTrainState& task) {
  for (std::size_t l = 0; l < admm.U.size(); ++l) admm.U[l] += task.weights[l] - admm.Z[l];
  for (std::size_t l = 0; l < admm.K.size(); ++l) admm.K[l] += task.masks[l] - admm.Y[l];
}

AdmmPhaseResult run_admm_phase(TaskTrainState& task, const std::vector<Matrix>& past,
                               BiasSet& biases, const TaskDataset& data,
                               const SparsityBudget& budgets, PruningKind kind, long epochs,
                               Index batch_size, double learning_rate, long schedule_intervals,
                               std::uint64_t seed) {
  const std::size_t layers = task.weights.size();
  require(epochs >= 1, "run_admm_phase: need at least one outer iteration");
  require(budgets.alpha.size() == layers, "run_admm_phase: alpha budget layer count mismatch");
  const bool with_mask = !task.masks.empty();
  for (std::size_t l = 0; l < layers; ++l) {
    require(budgets.alpha[l] >= 1, "run_admm_phase: layer " + std::to_string(l) +
                                       " has a zero weight budget; nothing to train");
    if (with_mask)
      require(budgets.beta[l] >= 1, "run_admm_phase: layer " + std::to_string(l) +
                                        " has a zero mask budget; drop the mask instead");
  }

  AdmmState admm =
      init_admm(task, budgets, kind, penalty_schedule(0, epochs, 1e-3, 10.0, schedule_intervals));
  AdamState adam = make_adam_state(task.weights, task.masks, task.head, biases, learning_rate);

  AdmmPhaseResult result;
  result.residuals.reserve(static_cast<std::size_t>(epochs));
  GradientSet grads;
  for (long iter = 0; iter < epochs; ++iter) {
    set_penalty(admm, penalty_schedule(iter, epochs, 1e-3, 10.0, schedule_intervals));
    const auto batches = batch_indices(data.train_x.rows(), batch_size, seed, iter);
    double loss_sum = 0.0;
    for (const auto& idx : batches) {
      const Batch b = gather(data.train_x, data.train_y, idx);
      const double loss = proximal_loss_and_grads(task, past, biases, admm, b.x, b.y, grads);
      if (!std::isfinite(loss))
        throw std::runtime_error("run_admm_phase: non-finite augmented loss at outer iteration " +
                                 std::to_string(iter) + " (task " + std::to_string(task.task_id) +
                                 ")");
      adam_step(task.weights, task.masks, task.head, biases, grads, adam);
      loss_sum += loss;
    }
    update_auxiliary(admm, task, budgets, kind);
    update_duals(admm, task);
    admm.outer_iteration = iter + 1;

    AdmmResidualRecord rec;
    rec.outer_iteration = admm.outer_iteration;
    rec.rho = admm.rho.empty() ? 0.0 : admm.rho[0];
    rec.augmented_loss = batches.empty() ? 0.0 : loss_sum / static_cast<double>(batches.size());
    for (std::size_t l = 0; l < layers; ++l)
      rec.weight_residual.push_back((task.weights[l] - admm.Z[l]).norm());
    for (std::size_t l = 0; l < admm.Y.size(); ++l)
      rec.mask_residual.push_back((task.masks[l] - admm.Y[l]).norm());
    rec.feasible = iterate_feasible(admm, task, budgets, kind);
    result.residuals.push_back(std::move(rec));
  }
  result.state = std::move(admm);
  return result;
}

}  // namespace lps

#include "lps/trainer.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "lps/digest.hpp"
#include "lps/rng.hpp"

namespace lps {

namespace {

// The mask is constant within the warm-up and final phases, so the borrowed
// contribution is precomputed once per phase instead of per batch.
std::vector<Matrix> borrowed_weights(const TaskTrainState& task, const std::vector<Matrix>& past) {
  std::vector<Matrix> borrow;
  if (task.masks.empty()) return borrow;
  borrow.reserve(task.masks.size());
  for (std::size_t l = 0; l < task.masks.size(); ++l)
    borrow.push_back(task.masks[l].cwiseProduct(past[l]));
  return borrow;
}

double masked_training_epoch(TaskTrainState& task, const std::vector<Matrix>& borrow,
                             BiasSet& biases, const TaskDataset& data,
                             const TrainableSet& trainable, Index batch_size, std::uint64_t seed,
                             long epoch, AdamState& adam) {
  std::vector<Matrix> no_masks;
  GradientSet grads;
  const auto batches = batch_indices(data.train_x.rows(), batch_size, seed, epoch);
  double loss_sum = 0.0;
  for (const auto& idx : batches) {
    const Batch b = gather(data.train_x, data.train_y, idx);
    std::vector<Matrix> effective = task.weights;
    for (std::size_t l = 0; l < borrow.size(); ++l) effective[l] += borrow[l];
    loss_sum += loss_and_grads(effective, task.head, biases, b.x, b.y, trainable, grads);
    adam_step(task.weights, no_masks, task.head, biases, grads, adam);
  }
  return batches.empty() ? 0.0 : loss_sum / static_cast<double>(batches.size());
}

}  // namespace

void PhasePlan::validate() const {
  require(warmup_epochs >= 0 && admm_epochs >= 0 && final_epochs >= 0,
          "PhasePlan: epoch counts must be non-negative");
  require(schedule_intervals >= 1, "PhasePlan: need at least one penalty interval");
  require(admm_epochs == 0 || admm_epochs >= schedule_intervals,
          "PhasePlan: admm_epochs must cover the penalty schedule");
  require(alpha_pct > 0.0 && alpha_pct <= 100.0, "PhasePlan: alpha_pct outside (0, 100]");
  require(beta_pct >= 0.0 && beta_pct <= 100.0, "PhasePlan: beta_pct outside [0, 100]");
  require(learning_rate > 0.0, "PhasePlan: learning rate must be positive");
  require(batch_size >= 1, "PhasePlan: batch size must be positive");
}

Engine make_engine(const NetworkSpec& spec, std::uint64_t seed, double capacity_fraction) {
  spec.validate();
  Engine engine;
  engine.spec = spec;
  engine.root_seed = seed;
  engine.ledger = make_ledger(spec.zero_feature_weights());
  if (capacity_fraction < 1.0)
    reserve_capacity(engine.ledger, capacity_fraction, derive_seed(seed, "capacity"));
  for (std::size_t l = 0; l < spec.feature_layer_count(); ++l)
    engine.feature_biases.push_back(Vector::Zero(spec.feature_cols(l)));
  return engine;
}

BiasSet assemble_biases(const Engine& engine, const Vector& head_bias) {
  require(head_bias.size() == engine.spec.class_count(),
          "assemble_biases: head bias size mismatch");
  BiasSet biases;
  biases.layers = engine.feature_biases;
  biases.layers.push_back(head_bias);
  biases.frozen = engine.ledger.committed_count() >= 1;
  return biases;
}

TaskTrainState warmup(Engine& engine, BiasSet& biases, const TaskDataset& data,
                      const PhasePlan& plan, bool with_mask, std::vector<EpochRecord>* log) {
  plan.validate();
  const int task_id = static_cast<int>(engine.ledger.committed_count()) + 1;
  require(data.task_id == task_id,
          "warmup: dataset is for task " + std::to_string(data.task_id) + ", engine expects " +
              std::to_string(task_id));
  require(data.class_count == static_cast<int>(engine.spec.class_count()),
          "warmup: dataset class count mismatch");

  TaskTrainState task;
  task.task_id = task_id;
  task.free_support = free_support(engine.ledger);
  task.past_support = engine.ledger.used_support;
  for (std::size_t l = 0; l < task.free_support.layer_count(); ++l)
    require(task.free_support.count(l) >= 1,
            "warmup: layer " + std::to_string(l) + " has no free capacity");

  for (std::size_t l = 0; l < engine.spec.feature_layer_count(); ++l) {
    Rng rng(derive_seed(engine.root_seed, "warmup-init", static_cast<std::uint64_t>(task_id), l));
    task.weights.push_back(
        keep_where(task.free_support.layers[l],
                   init_weight(engine.spec.feature_rows(l), engine.spec.feature_cols(l), rng)));
    if (with_mask)
      task.masks.push_back(task.past_support.layers[l].cast<double>().matrix());
  }
  Rng head_rng(derive_seed(engine.root_seed, "head-init", static_cast<std::uint64_t>(task_id)));
  task.head = init_weight(engine.spec.head_rows(), engine.spec.class_count(), head_rng);
  task.head_bias = Vector::Zero(engine.spec.class_count());
  biases = assemble_biases(engine, task.head_bias);

  TrainableSet trainable;
  trainable.weights = task.free_support;
  trainable.feature_biases = !biases.frozen;
  const std::vector<Matrix> borrow = borrowed_weights(task, engine.ledger.accumulated);
  std::vector<Matrix> no_masks;
  AdamState adam = make_adam_state(task.weights, no_masks, task.head, biases, plan.learning_rate);
  for (long epoch = 0; epoch < plan.warmup_epochs; ++epoch) {
    const double mean_loss = masked_training_epoch(
        task, borrow, biases, data, trainable, plan.batch_size,
        derive_seed(engine.root_seed, "warmup-batches", static_cast<std::uint64_t>(task_id)),
        epoch, adam);
    if (log) log->push_back({task_id, "warmup", epoch + 1, mean_loss});
  }
  task.head_bias = biases.layers.back();
  return task;
}

TaskSlice finalize(Engine& engine, TaskTrainState& task, BiasSet& biases, const TaskDataset& data,
                   const SparsityBudget& budgets, const PhasePlan& plan,
                   std::vector<EpochRecord>* log) {
  plan.validate();
  const std::size_t layers = task.weights.size();
  require(budgets.alpha.size() == layers, "finalize: alpha budget layer count mismatch");
  const bool with_mask = !task.masks.empty();
  require(!with_mask || budgets.beta.size() == layers,
          "finalize: beta budget layer count mismatch");

  TaskSlice slice;
  slice.task_id = task.task_id;
  for (std::size_t l = 0; l < layers; ++l) {
    Projected p;
    if (plan.pruning_kind == PruningKind::irregular) {
      p = project_irregular(task.weights[l], budgets.alpha[l], task.free_support.layers[l]);
    } else {
      const GroupAxis axis =
          (plan.pruning_kind == PruningKind::column) ? GroupAxis::column : GroupAxis::filter;
      p = project_structured(task.weights[l], budgets.alpha[l], axis,
                             fully_eligible_groups(task.free_support.layers[l], axis));
    }
    task.weights[l] = p.values;
    slice.weight_support.layers.push_back(p.kept);
  }
  if (with_mask) {
    for (std::size_t l = 0; l < layers; ++l) {
      const Projected p =
          project_mask_binary(task.masks[l], budgets.beta[l], task.past_support.layers[l]);
      task.masks[l] = p.values;
      slice.mask_support.layers.push_back(p.kept);
    }
  } else {
    slice.mask_support = SupportSet::empty_like(task.weights);
  }

  TrainableSet trainable;
  trainable.weights = slice.weight_support;
  trainable.feature_biases = !biases.frozen;
  const std::vector<Matrix> borrow = borrowed_weights(task, engine.ledger.accumulated);
  std::vector<Matrix> no_masks;
  AdamState adam = make_adam_state(task.weights, no_masks, task.head, biases, plan.learning_rate);
  for (long epoch = 0; epoch < plan.final_epochs; ++epoch) {
    const double mean_loss = masked_training_epoch(
        task, borrow, biases, data, trainable, plan.batch_size,
        derive_seed(engine.root_seed, "final-batches", static_cast<std::uint64_t>(task.task_id)),
        epoch, adam);
    if (log) log->push_back({task.task_id, "final", epoch + 1, mean_loss});
  }

  task.head_bias = biases.layers.back();
  slice.weights = task.weights;
  slice.masks = task.masks;
  slice.head = task.head;
  slice.head_bias = task.head_bias;
  return slice;
}

TaskRunRecord train_task(Engine& engine, const TaskDataset& data, const PhasePlan& plan,
                         bool prune) {
  plan.validate();
  const int task_id = static_cast<int>(engine.ledger.committed_count()) + 1;
  bool with_mask = task_id >= 2 && plan.beta_pct > 0.0;
  if (with_mask)
    for (std::size_t l = 0; l < engine.ledger.used_support.layer_count(); ++l)
      if (engine.ledger.used_support.count(l) < 1) with_mask = false;

  TaskRunRecord rec;
  BiasSet biases;
  TaskTrainState task = warmup(engine, biases, data, plan, with_mask, &rec.epochs);

  const double alpha_pct = prune ? plan.alpha_pct : 100.0;
  const SparsityBudget budgets =
      resolve_budgets(plan.pruning_kind, alpha_pct, with_mask ? plan.beta_pct : 0.0,
                      task.free_support, task.past_support, with_mask);
  if (plan.admm_epochs > 0) {
    AdmmPhaseResult admm = run_admm_phase(
        task, engine.ledger.accumulated, biases, data, budgets, plan.pruning_kind,
        plan.admm_epochs, plan.batch_size, plan.learning_rate, plan.schedule_intervals,
        derive_seed(engine.root_seed, "admm-batches", static_cast<std::uint64_t>(task_id)));
    rec.residuals = std::move(admm.residuals);
  }

  TaskSlice slice = finalize(engine, task, biases, data, budgets, plan, &rec.epochs);
  commit_task(engine.ledger, slice);
  if (!biases.frozen)
    engine.feature_biases.assign(biases.layers.begin(), biases.layers.end() - 1);

  rec.eval = evaluate(engine, task_id, data.test_x, data.test_y);
  return rec;
}

EvalRecord evaluate(const Engine& engine, int task_id, const Matrix& test_x,
                    const Eigen::VectorXi& test_y) {
  require(task_id >= 1 && task_id <= engine.ledger.committed_count(),
          "evaluate: task " + std::to_string(task_id) + " is not committed");
  require(test_y.size() == test_x.rows(), "evaluate: label count mismatch");
  const TaskSlice& slice = engine.ledger.slices[static_cast<std::size_t>(task_id - 1)];
  const std::vector<Matrix> effective = effective_weights(engine.ledger, slice);
  const BiasSet biases = assemble_biases(engine, slice.head_bias);
  const Matrix logits = forward(effective, slice.head, biases, test_x);

  long correct = 0;
  for (Index i = 0; i < logits.rows(); ++i) {
    Index best = 0;
    for (Index c = 1; c < logits.cols(); ++c)
      if (logits(i, c) > logits(i, best)) best = c;
    if (static_cast<int>(best) == test_y(i)) ++correct;
  }

  EvalRecord eval;
  eval.task_id = task_id;
  eval.sample_count = logits.rows();
  eval.top1_accuracy =
      logits.rows() == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(logits.rows());
  eval.logits_digest = digest_matrix(logits);
  return eval;
}

SequenceResult run_sequence(
    Engine& engine, const std::vector<TaskDataset>& datasets, const PhasePlan& plan,
    const std::function<void(const TaskRunRecord&, const std::vector<EvalRecord>&)>& on_task) {
  plan.validate();
  require(!datasets.empty(), "run_sequence: no datasets");
  SequenceResult out;
  for (std::size_t i = 0; i < datasets.size(); ++i) {
    const bool last = (i + 1 == datasets.size());
    TaskRunRecord rec = train_task(engine, datasets[i], plan, plan.prune_last_task || !last);
    std::vector<EvalRecord> row;
    for (int t = 1; t <= engine.ledger.committed_count(); ++t)
      row.push_back(evaluate(engine, t, datasets[static_cast<std::size_t>(t - 1)].test_x,
                             datasets[static_cast<std::size_t>(t - 1)].test_y));
    if (on_task) on_task(rec, row);
    out.tasks.push_back(std::move(rec));
    out.matrix.push_back(std::move(row));
  }
  double sum = 0.0;
  for (const EvalRecord& e : out.matrix.back()) sum += e.top1_accuracy;
  out.average_accuracy = sum / static_cast<double>(out.matrix.back().size());
  return out;
}

}  // namespace lps

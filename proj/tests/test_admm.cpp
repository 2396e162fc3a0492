#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lps/admm.hpp"
#include "lps/gradcheck.hpp"
#include "lps/network.hpp"
#include "lps/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

using namespace lps;

namespace {

bool same_values(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

// A two-hidden-layer net mid-sequence: a committed past occupies roughly 40%
// of each feature layer, the new task warm-starts on the complement.
struct Scenario {
  NetworkSpec spec{{4, 6, 5, 3}};
  std::vector<Matrix> past;
  TaskTrainState task;
  BiasSet biases;
};

Scenario make_scenario(bool with_mask, std::uint64_t seed) {
  Scenario s;
  Rng rng(derive_seed(seed, "admm-scenario"));
  const std::size_t layers = s.spec.feature_layer_count();
  s.task.task_id = with_mask ? 2 : 1;
  s.task.free_support.layers.resize(layers);
  s.task.past_support.layers.resize(layers);
  for (std::size_t l = 0; l < layers; ++l) {
    const Index rows = s.spec.feature_rows(l);
    const Index cols = s.spec.feature_cols(l);
    BoolMatrix used(rows, cols);
    for (Index c = 0; c < cols; ++c)
      for (Index r = 0; r < rows; ++r) used(r, c) = rng.uniform() < 0.4;
    used(0, 0) = true;
    s.task.past_support.layers[l] = used;
    s.task.free_support.layers[l] = !used;
    Matrix pv = Matrix::Zero(rows, cols);
    Matrix w = Matrix::Zero(rows, cols);
    Matrix m = Matrix::Zero(rows, cols);
    for (Index c = 0; c < cols; ++c)
      for (Index r = 0; r < rows; ++r) {
        if (used(r, c))
          pv(r, c) = rng.gaussian();
        else
          w(r, c) = 0.5 * rng.gaussian();
        if (with_mask && used(r, c)) m(r, c) = rng.uniform();
      }
    s.past.push_back(pv);
    s.task.weights.push_back(w);
    if (with_mask) s.task.masks.push_back(m);
  }
  s.task.head = init_weight(s.spec.head_rows(), s.spec.class_count(), rng);
  s.task.head_bias = Vector::Zero(s.spec.class_count());
  for (std::size_t l = 1; l < s.spec.layer_dims.size(); ++l) {
    Vector b(s.spec.layer_dims[l]);
    for (Index i = 0; i < b.size(); ++i) b(i) = 0.1 * rng.gaussian();
    s.biases.layers.push_back(b);
  }
  s.biases.frozen = with_mask;
  return s;
}

AdmmState zero_penalty_state(const Scenario& s) {
  AdmmState admm;
  const std::size_t layers = s.task.weights.size();
  admm.rho.assign(layers, 0.0);
  admm.tau.assign(layers, 0.0);
  for (std::size_t l = 0; l < layers; ++l) {
    admm.Z.push_back(Matrix::Zero(s.task.weights[l].rows(), s.task.weights[l].cols()));
    admm.U.push_back(Matrix::Zero(s.task.weights[l].rows(), s.task.weights[l].cols()));
    if (!s.task.masks.empty()) {
      admm.Y.push_back(Matrix::Zero(s.task.masks[l].rows(), s.task.masks[l].cols()));
      admm.K.push_back(Matrix::Zero(s.task.masks[l].rows(), s.task.masks[l].cols()));
    }
  }
  return admm;
}

TaskDataset blob_data(std::uint64_t seed, Index train = 120, Index test = 60) {
  return make_blob_tasks(1, 4, 3, train, test, seed, 0.0)[0];
}

double summed_weight_residual(const AdmmResidualRecord& rec) {
  double s = 0.0;
  for (double r : rec.weight_residual) s += r;
  return s;
}

}  // namespace

TEST_CASE("penalty schedule is a staircase over equal intervals") {
  CHECK(penalty_schedule(0, 90) == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(penalty_schedule(29, 90) == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(penalty_schedule(30, 90) == doctest::Approx(1e-2).epsilon(1e-12));
  CHECK(penalty_schedule(59, 90) == doctest::Approx(1e-2).epsilon(1e-12));
  CHECK(penalty_schedule(60, 90) == doctest::Approx(1e-1).epsilon(1e-12));
  CHECK(penalty_schedule(89, 90) == doctest::Approx(1e-1).epsilon(1e-12));

  CHECK(penalty_schedule(0, 3) == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(penalty_schedule(1, 3) == doctest::Approx(1e-2).epsilon(1e-12));
  CHECK(penalty_schedule(2, 3) == doctest::Approx(1e-1).epsilon(1e-12));

  // 5 iterations, 3 intervals: the step points land at ceil boundaries
  CHECK(penalty_schedule(1, 5) == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(penalty_schedule(2, 5) == doctest::Approx(1e-2).epsilon(1e-12));
  CHECK(penalty_schedule(4, 5) == doctest::Approx(1e-1).epsilon(1e-12));

  CHECK_THROWS_AS(penalty_schedule(-1, 10), std::invalid_argument);
  CHECK_THROWS_AS(penalty_schedule(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(penalty_schedule(0, 10, 1e-3, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(penalty_schedule(0, 10, 1e-3, 10.0, 0), std::invalid_argument);
}

TEST_CASE("zero penalty reduces the augmented objective to the plain loss") {
  Scenario s = make_scenario(true, 11);
  const TaskDataset data = blob_data(21);
  const AdmmState admm = zero_penalty_state(s);

  GradientSet got;
  const double aug = proximal_loss_and_grads(s.task, s.past, s.biases, admm, data.train_x,
                                             data.train_y, got);

  std::vector<Matrix> effective = s.task.weights;
  for (std::size_t l = 0; l < effective.size(); ++l)
    effective[l] += s.task.masks[l].cwiseProduct(s.past[l]);
  TrainableSet trainable;
  trainable.weights = set_union(s.task.free_support, s.task.past_support);
  trainable.feature_biases = !s.biases.frozen;
  GradientSet plain;
  const double ce = loss_and_grads(effective, s.task.head, s.biases, data.train_x, data.train_y,
                                   trainable, plain);

  CHECK(aug == ce);
  for (std::size_t l = 0; l < effective.size(); ++l) {
    CHECK(same_values(got.weights[l], keep_where(s.task.free_support.layers[l], plain.weights[l])));
    CHECK(same_values(got.masks[l],
                      keep_where(s.task.past_support.layers[l],
                                 Matrix(plain.weights[l].cwiseProduct(s.past[l])))));
  }
  CHECK(same_values(got.head, plain.head));
  for (std::size_t l = 0; l < got.biases.size(); ++l)
    CHECK((got.biases[l].array() == plain.biases[l].array()).all());
}

TEST_CASE("primal point equal to the auxiliary point adds nothing") {
  Scenario s = make_scenario(true, 13);
  const TaskDataset data = blob_data(23);

  AdmmState at_fixed_point = zero_penalty_state(s);
  at_fixed_point.rho.assign(s.task.weights.size(), 7.5);
  at_fixed_point.tau.assign(s.task.weights.size(), 3.25);
  for (std::size_t l = 0; l < s.task.weights.size(); ++l) {
    at_fixed_point.Z[l] = s.task.weights[l];
    at_fixed_point.Y[l] = s.task.masks[l];
  }

  GradientSet with_penalty;
  const double aug = proximal_loss_and_grads(s.task, s.past, s.biases, at_fixed_point, data.train_x,
                                             data.train_y, with_penalty);
  GradientSet without;
  const double ce = proximal_loss_and_grads(s.task, s.past, s.biases, zero_penalty_state(s),
                                            data.train_x, data.train_y, without);

  CHECK(aug == ce);
  for (std::size_t l = 0; l < s.task.weights.size(); ++l) {
    CHECK(same_values(with_penalty.weights[l], without.weights[l]));
    CHECK(same_values(with_penalty.masks[l], without.masks[l]));
  }
}

TEST_CASE("frozen feature biases get exactly zero gradients") {
  Scenario s = make_scenario(true, 17);
  REQUIRE(s.biases.frozen);
  const TaskDataset data = blob_data(27);
  GradientSet grads;
  proximal_loss_and_grads(s.task, s.past, s.biases, zero_penalty_state(s), data.train_x,
                          data.train_y, grads);
  for (std::size_t l = 0; l + 1 < grads.biases.size(); ++l)
    CHECK((grads.biases[l].array() == 0.0).all());
  CHECK((grads.biases.back().array() != 0.0).any());
}

TEST_CASE("dual updates accumulate the split residual") {
  TaskTrainState task;
  task.task_id = 2;
  task.weights.push_back((Matrix(2, 2) << 3.0, 0.0, 0.0, 0.0).finished());
  task.masks.push_back((Matrix(2, 2) << 0.9, 0.2, 0.0, 0.0).finished());

  AdmmState admm;
  admm.Z.push_back((Matrix(2, 2) << 2.0, 0.0, 0.0, 0.0).finished());
  admm.U.push_back(Matrix::Zero(2, 2));
  admm.Y.push_back((Matrix(2, 2) << 1.0, 0.0, 0.0, 0.0).finished());
  admm.K.push_back(Matrix::Zero(2, 2));
  admm.rho.assign(1, 1.0);
  admm.tau.assign(1, 1.0);

  update_duals(admm, task);
  CHECK(admm.U[0](0, 0) == 1.0);
  CHECK(admm.U[0](0, 1) == 0.0);
  CHECK(admm.K[0](0, 0) == doctest::Approx(-0.1).epsilon(1e-15));
  CHECK(admm.K[0](0, 1) == 0.2);

  update_duals(admm, task);
  CHECK(admm.U[0](0, 0) == 2.0);
  CHECK(admm.K[0](0, 1) == 0.4);
}

TEST_CASE("auxiliary update projects onto both constraint sets") {
  TaskTrainState task;
  task.task_id = 2;
  task.weights.push_back((Matrix(1, 4) << 3.0, -5.0, 1.0, 0.0).finished());
  task.masks.push_back((Matrix(1, 4) << 0.9, 0.2, 0.6, 0.4).finished());
  task.free_support.layers.push_back(BoolMatrix::Constant(1, 4, true));
  task.past_support.layers.push_back(BoolMatrix::Constant(1, 4, true));

  AdmmState admm;
  admm.Z.push_back(Matrix::Zero(1, 4));
  admm.U.push_back(Matrix::Zero(1, 4));
  admm.Y.push_back(Matrix::Zero(1, 4));
  admm.K.push_back(Matrix::Zero(1, 4));
  admm.rho.assign(1, 1.0);
  admm.tau.assign(1, 1.0);

  SparsityBudget budgets;
  budgets.alpha = {2};
  budgets.beta = {2};
  update_auxiliary(admm, task, budgets, PruningKind::irregular);

  CHECK(admm.Z[0](0, 0) == 3.0);
  CHECK(admm.Z[0](0, 1) == -5.0);
  CHECK(admm.Z[0](0, 2) == 0.0);
  CHECK(admm.Z[0](0, 3) == 0.0);

  CHECK(admm.Y[0](0, 0) == 1.0);
  CHECK(admm.Y[0](0, 1) == 0.0);
  CHECK(admm.Y[0](0, 2) == 1.0);
  CHECK(admm.Y[0](0, 3) == 0.0);

  // a nonzero dual shifts the projection target
  admm.U[0](0, 2) = 6.0;
  update_auxiliary(admm, task, budgets, PruningKind::irregular);
  CHECK(admm.Z[0](0, 2) == 7.0);
  CHECK(admm.Z[0](0, 1) == -5.0);
  CHECK(admm.Z[0](0, 0) == 0.0);
}

TEST_CASE("finite differences validate the augmented gradients including masks") {
  Scenario s = make_scenario(true, 31);
  s.biases.frozen = false;  // widen the check to every parameter block
  const TaskDataset data = blob_data(33);

  AdmmState admm = zero_penalty_state(s);
  Rng rng(derive_seed(97, "admm-fd"));
  for (std::size_t l = 0; l < s.task.weights.size(); ++l) {
    admm.rho[l] = 0.37;
    admm.tau[l] = 0.53;
    Matrix z = s.task.weights[l];
    Matrix u = s.task.weights[l];
    Matrix y = s.task.masks[l];
    Matrix k = s.task.masks[l];
    for (Index c = 0; c < z.cols(); ++c)
      for (Index r = 0; r < z.rows(); ++r) {
        z(r, c) = rng.gaussian();
        u(r, c) = 0.3 * rng.gaussian();
        y(r, c) = rng.uniform();
        k(r, c) = 0.2 * rng.gaussian();
      }
    admm.Z[l] = keep_where(s.task.free_support.layers[l], z);
    admm.U[l] = keep_where(s.task.free_support.layers[l], u);
    admm.Y[l] = keep_where(s.task.past_support.layers[l], y);
    admm.K[l] = keep_where(s.task.past_support.layers[l], k);
  }

  GradientSet grads;
  proximal_loss_and_grads(s.task, s.past, s.biases, admm, data.train_x, data.train_y, grads);

  std::vector<std::pair<double*, double>> coords;
  for (std::size_t l = 0; l < s.task.weights.size(); ++l) {
    const BoolMatrix& free = s.task.free_support.layers[l];
    const BoolMatrix& past = s.task.past_support.layers[l];
    for (Index c = 0; c < free.cols(); ++c)
      for (Index r = 0; r < free.rows(); ++r) {
        if (free(r, c)) coords.emplace_back(&s.task.weights[l](r, c), grads.weights[l](r, c));
        if (past(r, c)) coords.emplace_back(&s.task.masks[l](r, c), grads.masks[l](r, c));
      }
  }
  for (Index c = 0; c < s.task.head.cols(); ++c)
    for (Index r = 0; r < s.task.head.rows(); ++r)
      coords.emplace_back(&s.task.head(r, c), grads.head(r, c));
  for (std::size_t l = 0; l < s.biases.layers.size(); ++l)
    for (Index i = 0; i < s.biases.layers[l].size(); ++i)
      coords.emplace_back(&s.biases.layers[l](i), grads.biases[l](i));
  REQUIRE(coords.size() >= 80);

  GradientSet scratch;
  const auto objective = [&] {
    return proximal_loss_and_grads(s.task, s.past, s.biases, admm, data.train_x, data.train_y,
                                   scratch);
  };
  CHECK(max_relative_gradient_error(objective, coords) < 1e-4);
}

TEST_CASE("a full-batch primal epoch decreases the augmented objective") {
  Scenario s = make_scenario(true, 41);
  const TaskDataset data = blob_data(43);
  const SparsityBudget budgets =
      resolve_budgets(PruningKind::irregular, 30.0, 50.0, s.task.free_support, s.task.past_support,
                      true);
  AdmmState admm = init_admm(s.task, budgets, PruningKind::irregular, 0.1);

  AdamState adam = make_adam_state(s.task.weights, s.task.masks, s.task.head, s.biases, 5e-3);
  GradientSet grads;
  double first = 0.0, last = 0.0;
  for (int step = 0; step < 30; ++step) {
    last = proximal_loss_and_grads(s.task, s.past, s.biases, admm, data.train_x, data.train_y,
                                   grads);
    if (step == 0) first = last;
    adam_step(s.task.weights, s.task.masks, s.task.head, s.biases, grads, adam);
  }
  CHECK(std::isfinite(last));
  CHECK(last < first);
}

TEST_CASE("a larger penalty pulls the primal point closer to the auxiliary") {
  const SparsityBudget budgets = [&] {
    Scenario probe = make_scenario(false, 51);
    return resolve_budgets(PruningKind::irregular, 30.0, 0.0, probe.task.free_support,
                           probe.task.past_support, false);
  }();

  const auto residual_after_epoch = [&](double rho) {
    Scenario s = make_scenario(false, 51);
    const TaskDataset data = blob_data(53);
    AdmmState admm = init_admm(s.task, budgets, PruningKind::irregular, rho);
    AdamState adam = make_adam_state(s.task.weights, s.task.masks, s.task.head, s.biases, 2e-3);
    GradientSet grads;
    for (int step = 0; step < 25; ++step) {
      proximal_loss_and_grads(s.task, s.past, s.biases, admm, data.train_x, data.train_y, grads);
      adam_step(s.task.weights, s.task.masks, s.task.head, s.biases, grads, adam);
    }
    double res = 0.0;
    for (std::size_t l = 0; l < s.task.weights.size(); ++l)
      res += (s.task.weights[l] - admm.Z[l]).norm();
    return res;
  };

  CHECK(residual_after_epoch(10.0) < residual_after_epoch(0.01));
}

TEST_CASE("warm-start auxiliaries are feasible from the first iterate") {
  Scenario s = make_scenario(true, 61);
  const SparsityBudget budgets =
      resolve_budgets(PruningKind::irregular, 25.0, 60.0, s.task.free_support, s.task.past_support,
                      true);
  const AdmmState admm = init_admm(s.task, budgets, PruningKind::irregular, 1e-3);
  for (std::size_t l = 0; l < admm.Z.size(); ++l) {
    CHECK((admm.Z[l].array() != 0.0).count() <= budgets.alpha[l]);
    CHECK((!s.task.free_support.layers[l] && admm.Z[l].array() != 0.0).count() == 0);
    const auto y = admm.Y[l].array();
    CHECK((y == 0.0 || y == 1.0).all());
    CHECK(std::lround(admm.Y[l].sum()) == budgets.beta[l]);
    CHECK((admm.U[l].array() == 0.0).all());
    CHECK((admm.K[l].array() == 0.0).all());
  }
}

TEST_CASE("full solver phase runs the schedule and stays feasible") {
  NetworkSpec spec{{4, 8, 6, 3}};
  Rng rng(derive_seed(71, "phase-init"));
  TaskTrainState task;
  task.task_id = 1;
  for (std::size_t l = 0; l < spec.feature_layer_count(); ++l) {
    task.free_support.layers.push_back(
        BoolMatrix::Constant(spec.feature_rows(l), spec.feature_cols(l), true));
    task.past_support.layers.push_back(
        BoolMatrix::Constant(spec.feature_rows(l), spec.feature_cols(l), false));
    task.weights.push_back(init_weight(spec.feature_rows(l), spec.feature_cols(l), rng));
  }
  task.head = init_weight(spec.head_rows(), spec.class_count(), rng);
  BiasSet biases;
  for (std::size_t l = 1; l < spec.layer_dims.size(); ++l)
    biases.layers.push_back(Vector::Zero(spec.layer_dims[l]));

  const TaskDataset data = blob_data(73, 240, 80);
  const SparsityBudget budgets = resolve_budgets(PruningKind::irregular, 25.0, 0.0,
                                                 task.free_support, task.past_support, false);

  TaskTrainState task_copy = task;
  BiasSet biases_copy = biases;

  const AdmmPhaseResult run = run_admm_phase(task, {Matrix::Zero(4, 8), Matrix::Zero(8, 6)}, biases,
                                             data, budgets, PruningKind::irregular, 15, 2, 2e-2, 3,
                                             derive_seed(71, "phase"));
  REQUIRE(run.residuals.size() == 15);
  for (int i = 0; i < 15; ++i) {
    const double expected_rho = (i < 5) ? 1e-3 : (i < 10) ? 1e-2 : 1e-1;
    CHECK(run.residuals[i].rho == doctest::Approx(expected_rho).epsilon(1e-12));
    CHECK(run.residuals[i].feasible);
    CHECK(std::isfinite(run.residuals[i].augmented_loss));
    CHECK(run.residuals[i].mask_residual.empty());
  }
  CHECK(summed_weight_residual(run.residuals.back()) <
        summed_weight_residual(run.residuals.front()));
  // converged-run regression value: the hard projection at the end is cheap
  for (std::size_t l = 0; l < task.weights.size(); ++l)
    CHECK((task.weights[l] - run.state.Z[l]).norm() / task.weights[l].norm() < 0.05);
  CHECK(run.state.outer_iteration == 15);

  const AdmmPhaseResult rerun = run_admm_phase(task_copy, {Matrix::Zero(4, 8), Matrix::Zero(8, 6)},
                                               biases_copy, data, budgets, PruningKind::irregular,
                                               15, 2, 2e-2, 3, derive_seed(71, "phase"));
  for (std::size_t l = 0; l < task.weights.size(); ++l) {
    CHECK(same_values(task.weights[l], task_copy.weights[l]));
    CHECK(same_values(run.state.Z[l], rerun.state.Z[l]));
  }
  CHECK(same_values(task.head, task_copy.head));
}

// Mid-sequence mask training the way the trainer stages it: the past is the
// top-magnitude core of a net actually trained on the data, the mask starts
// at 1 everywhere on that core, and the new task's weights warm-start small
// on the complement. Random past values would give the mask projection
// nothing stable to rank and the split would never settle.
TEST_CASE("solver phase trains masks jointly and keeps every iterate feasible") {
  const NetworkSpec spec{{4, 6, 5, 3}};
  const TaskDataset data = blob_data(83, 240, 60);
  Rng rng(derive_seed(81, "mask-phase"));

  std::vector<Matrix> dense;
  for (std::size_t l = 0; l < spec.feature_layer_count(); ++l)
    dense.push_back(init_weight(spec.feature_rows(l), spec.feature_cols(l), rng));
  Matrix dense_head = init_weight(spec.head_rows(), spec.class_count(), rng);
  BiasSet biases;
  for (std::size_t l = 1; l < spec.layer_dims.size(); ++l)
    biases.layers.push_back(Vector::Zero(spec.layer_dims[l]));
  TrainableSet all;
  for (const Matrix& w : dense)
    all.weights.layers.push_back(BoolMatrix::Constant(w.rows(), w.cols(), true));
  std::vector<Matrix> no_masks;
  AdamState pre = make_adam_state(dense, no_masks, dense_head, biases, 1e-2);
  GradientSet grads;
  for (int step = 0; step < 120; ++step) {
    loss_and_grads(dense, dense_head, biases, data.train_x, data.train_y, all, grads);
    adam_step(dense, no_masks, dense_head, biases, grads, pre);
  }

  TaskTrainState task;
  task.task_id = 2;
  std::vector<Matrix> past;
  for (std::size_t l = 0; l < dense.size(); ++l) {
    const BoolMatrix everything = BoolMatrix::Constant(dense[l].rows(), dense[l].cols(), true);
    const long core = std::lround(0.4 * static_cast<double>(dense[l].size()));
    const Projected kept = project_irregular(dense[l], core, everything);
    past.push_back(kept.values);
    task.past_support.layers.push_back(kept.kept);
    task.free_support.layers.push_back(!kept.kept);
    Matrix w = Matrix::Zero(dense[l].rows(), dense[l].cols());
    for (Index c = 0; c < w.cols(); ++c)
      for (Index r = 0; r < w.rows(); ++r)
        if (!kept.kept(r, c)) w(r, c) = 0.2 * rng.gaussian();
    task.weights.push_back(w);
    task.masks.push_back(kept.kept.cast<double>().matrix());
  }
  task.head = init_weight(spec.head_rows(), spec.class_count(), rng);
  task.head_bias = Vector::Zero(spec.class_count());
  biases.frozen = true;

  const SparsityBudget budgets = resolve_budgets(PruningKind::irregular, 30.0, 90.0,
                                                 task.free_support, task.past_support, true);
  const AdmmPhaseResult run = run_admm_phase(task, past, biases, data, budgets,
                                             PruningKind::irregular, 15, 2, 2e-2, 3,
                                             derive_seed(81, "phase"));
  REQUIRE(run.residuals.size() == 15);
  for (const auto& rec : run.residuals) {
    CHECK(rec.feasible);
    CHECK(std::isfinite(rec.augmented_loss));
    REQUIRE(rec.mask_residual.size() == task.masks.size());
  }
  double w_first = 0.0, w_last = 0.0, m_first = 0.0, m_last = 0.0;
  for (std::size_t l = 0; l < task.masks.size(); ++l) {
    w_first += run.residuals.front().weight_residual[l];
    w_last += run.residuals.back().weight_residual[l];
    m_first += run.residuals.front().mask_residual[l];
    m_last += run.residuals.back().mask_residual[l];
  }
  CHECK(w_last < w_first);
  CHECK(m_last < m_first);
}

TEST_CASE("solver phase rejects degenerate budgets and diverging losses") {
  Scenario s = make_scenario(false, 91);
  const TaskDataset data = blob_data(93);
  SparsityBudget budgets = resolve_budgets(PruningKind::irregular, 30.0, 0.0, s.task.free_support,
                                           s.task.past_support, false);

  SparsityBudget empty = budgets;
  empty.alpha[0] = 0;
  CHECK_THROWS_AS(run_admm_phase(s.task, s.past, s.biases, data, empty, PruningKind::irregular, 3,
                                 32, 1e-3, 3, 1),
                  std::invalid_argument);

  Scenario diverged = make_scenario(false, 91);
  diverged.task.weights[0](0, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(run_admm_phase(diverged.task, diverged.past, diverged.biases, data, budgets,
                                 PruningKind::irregular, 3, 32, 1e-3, 3, 1),
                  std::runtime_error);

  AdmmState admm = init_admm(s.task, budgets, PruningKind::irregular, 1e-2);
  CHECK_THROWS_AS(set_penalty(admm, 1e-3), std::invalid_argument);
}

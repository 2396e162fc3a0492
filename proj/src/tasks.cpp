#include "lps/tasks.hpp"

#include "lps/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace lps {

namespace {

Matrix draw_centers(int class_count, Index dim, double similarity, std::uint64_t seed, int task) {
  Matrix centers(class_count, dim);
  for (int c = 0; c < class_count; ++c) {
    Rng shared(derive_seed(seed, "blob-shared", static_cast<std::uint64_t>(c)));
    Rng own(derive_seed(seed, "blob-own", static_cast<std::uint64_t>(task),
                        static_cast<std::uint64_t>(c)));
    for (Index j = 0; j < dim; ++j) {
      const double s = shared.uniform(0.25, 0.75);
      const double o = own.uniform(0.25, 0.75);
      centers(c, j) = similarity * s + (1.0 - similarity) * o;
    }
  }
  return centers;
}

double min_center_distance(const Matrix& centers) {
  double best = std::numeric_limits<double>::infinity();
  for (Index a = 0; a < centers.rows(); ++a)
    for (Index b = a + 1; b < centers.rows(); ++b)
      best = std::min(best, (centers.row(a) - centers.row(b)).norm());
  return best;
}

void fill_blob_split(Matrix& x, Eigen::VectorXi& y, const Matrix& centers, double sigma,
                     Rng& rng) {
  const int classes = static_cast<int>(centers.rows());
  for (Index i = 0; i < x.rows(); ++i) {
    const int c = static_cast<int>(i) % classes;
    y(i) = c;
    for (Index j = 0; j < x.cols(); ++j)
      x(i, j) = std::clamp(centers(c, j) + sigma * rng.gaussian(), 0.0, 1.0);
  }
}

}  // namespace

std::vector<TaskDataset> make_blob_tasks(int n, Index input_dim, int class_count,
                                         Index train_per_task, Index test_per_task,
                                         std::uint64_t seed, double similarity) {
  require(n >= 1, "blob tasks: need at least one task");
  require(input_dim >= 1, "blob tasks: input dimension must be positive");
  require(class_count >= 2, "blob tasks: need at least two classes");
  require(train_per_task >= class_count, "blob tasks: need at least one train sample per class");
  require(test_per_task >= class_count, "blob tasks: need at least one test sample per class");
  require(similarity >= 0.0 && similarity <= 1.0, "blob tasks: similarity must be in [0, 1]");

  std::vector<TaskDataset> tasks;
  tasks.reserve(static_cast<std::size_t>(n));
  for (int t = 1; t <= n; ++t) {
    const Matrix centers = draw_centers(class_count, input_dim, similarity, seed, t);
    const double sigma = min_center_distance(centers) / 6.0;

    TaskDataset d;
    d.task_id = t;
    d.class_count = class_count;
    d.train_x.resize(train_per_task, input_dim);
    d.train_y.resize(train_per_task);
    d.test_x.resize(test_per_task, input_dim);
    d.test_y.resize(test_per_task);

    Rng train_rng(derive_seed(seed, "blob-train", static_cast<std::uint64_t>(t)));
    Rng test_rng(derive_seed(seed, "blob-test", static_cast<std::uint64_t>(t)));
    fill_blob_split(d.train_x, d.train_y, centers, sigma, train_rng);
    fill_blob_split(d.test_x, d.test_y, centers, sigma, test_rng);
    tasks.push_back(std::move(d));
  }
  return tasks;
}

std::vector<TaskDataset> make_permuted_tasks(const TaskDataset& base, int n, std::uint64_t seed) {
  require(n >= 1, "permuted tasks: need at least one task");
  require(base.train_x.rows() > 0 && base.test_x.rows() > 0, "permuted tasks: base is empty");
  require(base.class_count >= 2, "permuted tasks: base class count missing");

  const Index dim = base.train_x.cols();
  std::vector<TaskDataset> tasks;
  tasks.reserve(static_cast<std::size_t>(n));
  for (int t = 1; t <= n; ++t) {
    TaskDataset d;
    d.task_id = t;
    d.class_count = base.class_count;
    d.train_y = base.train_y;
    d.test_y = base.test_y;
    d.permutation.resize(static_cast<std::size_t>(dim));
    std::iota(d.permutation.begin(), d.permutation.end(), Index{0});
    if (t > 1) {
      Rng rng(derive_seed(seed, "permute", static_cast<std::uint64_t>(t)));
      rng.shuffle(d.permutation);
    }
    d.train_x.resize(base.train_x.rows(), dim);
    d.test_x.resize(base.test_x.rows(), dim);
    for (Index j = 0; j < dim; ++j) {
      d.train_x.col(j) = base.train_x.col(d.permutation[static_cast<std::size_t>(j)]);
      d.test_x.col(j) = base.test_x.col(d.permutation[static_cast<std::size_t>(j)]);
    }
    tasks.push_back(std::move(d));
  }
  return tasks;
}

namespace {

TaskDataset filter_classes(const TaskDataset& base, const std::vector<int>& classes, int task_id) {
  TaskDataset d;
  d.task_id = task_id;
  d.class_count = static_cast<int>(classes.size());

  auto remap = [&classes](int label) {
    for (std::size_t k = 0; k < classes.size(); ++k)
      if (classes[k] == label) return static_cast<int>(k);
    return -1;
  };

  const auto split = [&](const Matrix& x, const Eigen::VectorXi& y, Matrix& ox,
                         Eigen::VectorXi& oy) {
    std::vector<Index> rows;
    for (Index i = 0; i < y.size(); ++i)
      if (remap(y(i)) >= 0) rows.push_back(i);
    ox.resize(static_cast<Index>(rows.size()), x.cols());
    oy.resize(static_cast<Index>(rows.size()));
    for (std::size_t k = 0; k < rows.size(); ++k) {
      ox.row(static_cast<Index>(k)) = x.row(rows[k]);
      oy(static_cast<Index>(k)) = remap(y(rows[k]));
    }
  };
  split(base.train_x, base.train_y, d.train_x, d.train_y);
  split(base.test_x, base.test_y, d.test_x, d.test_y);
  return d;
}

}  // namespace

std::vector<TaskDataset> make_split_tasks(const TaskDataset& base, int classes_per_task, int n,
                                          std::uint64_t seed) {
  require(n >= 1, "split tasks: need at least one task");
  require(classes_per_task >= 1, "split tasks: need at least one class per task");
  require(n * classes_per_task <= base.class_count,
          "split tasks: not enough classes for the requested partition");

  std::vector<int> order(static_cast<std::size_t>(base.class_count));
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(seed, "split"));
  rng.shuffle(order);

  std::vector<TaskDataset> tasks;
  tasks.reserve(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t) {
    std::vector<int> group(order.begin() + t * classes_per_task,
                           order.begin() + (t + 1) * classes_per_task);
    std::sort(group.begin(), group.end());
    tasks.push_back(filter_classes(base, group, t + 1));
  }
  return tasks;
}

std::vector<std::vector<Index>> batch_indices(Index sample_count, Index batch_size,
                                              std::uint64_t seed, long epoch) {
  require(sample_count >= 1, "batches: empty dataset");
  require(batch_size >= 1, "batches: batch size must be positive");

  std::vector<Index> order(static_cast<std::size_t>(sample_count));
  std::iota(order.begin(), order.end(), Index{0});
  Rng rng(derive_seed(seed, "batches", static_cast<std::uint64_t>(epoch)));
  rng.shuffle(order);

  std::vector<std::vector<Index>> out;
  for (Index start = 0; start < sample_count; start += batch_size) {
    const Index stop = std::min(sample_count, start + batch_size);
    out.emplace_back(order.begin() + start, order.begin() + stop);
  }
  return out;
}

Batch gather(const Matrix& x, const Eigen::VectorXi& y, const std::vector<Index>& idx) {
  require(!idx.empty(), "gather: empty index list");
  Batch b;
  b.x.resize(static_cast<Index>(idx.size()), x.cols());
  b.y.resize(static_cast<Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) {
    require(idx[k] >= 0 && idx[k] < x.rows(), "gather: index out of range");
    b.x.row(static_cast<Index>(k)) = x.row(idx[k]);
    b.y(static_cast<Index>(k)) = y(idx[k]);
  }
  return b;
}

namespace {

void subsample_split(const Matrix& x, const Eigen::VectorXi& y, int classes, Index cap,
                     std::uint64_t seed, Matrix& ox, Eigen::VectorXi& oy) {
  const Index n = x.rows();
  if (cap <= 0 || cap >= n) {
    ox = x;
    oy = y;
    return;
  }

  std::vector<std::vector<Index>> buckets(static_cast<std::size_t>(classes));
  for (Index i = 0; i < n; ++i) buckets[static_cast<std::size_t>(y(i))].push_back(i);

  // largest-remainder apportionment of the cap across classes
  std::vector<long> quota(buckets.size(), 0);
  std::vector<std::pair<double, std::size_t>> remainders;
  long assigned = 0;
  for (std::size_t c = 0; c < buckets.size(); ++c) {
    const double exact = static_cast<double>(cap) * static_cast<double>(buckets[c].size()) /
                         static_cast<double>(n);
    quota[c] = static_cast<long>(exact);
    assigned += quota[c];
    remainders.push_back({exact - static_cast<double>(quota[c]), c});
  }
  std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (long k = 0; k < cap - assigned; ++k) ++quota[remainders[static_cast<std::size_t>(k)].second];

  std::vector<Index> chosen;
  for (std::size_t c = 0; c < buckets.size(); ++c) {
    Rng rng(derive_seed(seed, "stratified", static_cast<std::uint64_t>(c)));
    rng.shuffle(buckets[c]);
    const long take = std::min(quota[c], static_cast<long>(buckets[c].size()));
    chosen.insert(chosen.end(), buckets[c].begin(), buckets[c].begin() + take);
  }

  ox.resize(static_cast<Index>(chosen.size()), x.cols());
  oy.resize(static_cast<Index>(chosen.size()));
  for (std::size_t k = 0; k < chosen.size(); ++k) {
    ox.row(static_cast<Index>(k)) = x.row(chosen[k]);
    oy(static_cast<Index>(k)) = y(chosen[k]);
  }
}

}  // namespace

TaskDataset subsample_stratified(const TaskDataset& d, Index train_cap, Index test_cap,
                                 std::uint64_t seed) {
  require(d.class_count >= 1, "subsample: class count missing");
  TaskDataset out;
  out.task_id = d.task_id;
  out.class_count = d.class_count;
  out.permutation = d.permutation;
  subsample_split(d.train_x, d.train_y, d.class_count, train_cap,
                  derive_seed(seed, "train-split"), out.train_x, out.train_y);
  subsample_split(d.test_x, d.test_y, d.class_count, test_cap, derive_seed(seed, "test-split"),
                  out.test_x, out.test_y);
  return out;
}

}  // namespace lps

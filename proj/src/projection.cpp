#include "lps/projection.hpp"

#include <cstdlib>

namespace lps {

const char* to_string(PruningKind k) {
  switch (k) {
    case PruningKind::irregular: return "irregular";
    case PruningKind::column: return "column";
    case PruningKind::filter: return "filter";
  }
  return "?";
}

PruningKind pruning_kind_from_string(const std::string& s) {
  if (s == "irregular") return PruningKind::irregular;
  if (s == "column") return PruningKind::column;
  if (s == "filter") return PruningKind::filter;
  throw std::invalid_argument("unknown pruning kind: " + s);
}

Projected project_irregular(const Matrix& Z, long alpha, const BoolMatrix& eligible) {
  require(eligible.rows() == Z.rows() && eligible.cols() == Z.cols(),
          "project_irregular: eligibility shape mismatch");
  const long n_eligible = static_cast<long>(eligible.count());
  require(alpha >= 0, "project_irregular: alpha must be non-negative");
  require(alpha <= n_eligible, "project_irregular: alpha exceeds eligible coordinate count");

  std::vector<detail::Ranked> ranked;
  ranked.reserve(static_cast<std::size_t>(n_eligible));
  const double* z = Z.data();
  const bool* e = eligible.data();
  const Index n = Z.size();
  for (Index i = 0; i < n; ++i)
    if (e[i]) ranked.push_back({std::abs(z[i]), i});
  detail::rank_sort(ranked);

  Projected out;
  out.values = Matrix::Zero(Z.rows(), Z.cols());
  out.kept = BoolMatrix::Constant(Z.rows(), Z.cols(), false);
  for (long k = 0; k < alpha; ++k) {
    const Index i = ranked[static_cast<std::size_t>(k)].idx;
    out.values.data()[i] = z[i];
    out.kept.data()[i] = true;
  }
  return out;
}

std::vector<Index> fully_eligible_groups(const BoolMatrix& eligible, GroupAxis axis) {
  std::vector<Index> groups;
  if (axis == GroupAxis::column) {
    for (Index j = 0; j < eligible.cols(); ++j)
      if (eligible.col(j).all()) groups.push_back(j);
  } else {
    for (Index i = 0; i < eligible.rows(); ++i)
      if (eligible.row(i).all()) groups.push_back(i);
  }
  return groups;
}

Projected project_structured(const Matrix& Z, long alpha, GroupAxis axis,
                             const std::vector<Index>& eligible_groups) {
  const Index group_count = (axis == GroupAxis::column) ? Z.cols() : Z.rows();
  require(alpha >= 0, "project_structured: alpha must be non-negative");
  require(alpha <= static_cast<long>(eligible_groups.size()),
          "project_structured: alpha exceeds eligible group count");
  for (Index g : eligible_groups)
    require(g >= 0 && g < group_count, "project_structured: group index out of range");

  std::vector<detail::Ranked> ranked;
  ranked.reserve(eligible_groups.size());
  for (Index g : eligible_groups) {
    const double norm = (axis == GroupAxis::column) ? Z.col(g).norm() : Z.row(g).norm();
    ranked.push_back({norm, g});
  }
  detail::rank_sort(ranked);

  Projected out;
  out.values = Matrix::Zero(Z.rows(), Z.cols());
  out.kept = BoolMatrix::Constant(Z.rows(), Z.cols(), false);
  for (long k = 0; k < alpha; ++k) {
    const Index g = ranked[static_cast<std::size_t>(k)].idx;
    if (axis == GroupAxis::column) {
      out.values.col(g) = Z.col(g);
      out.kept.col(g) = true;
    } else {
      out.values.row(g) = Z.row(g);
      out.kept.row(g) = true;
    }
  }
  return out;
}

Projected project_mask_binary(const Matrix& Z, long beta, const BoolMatrix& eligible) {
  require(eligible.rows() == Z.rows() && eligible.cols() == Z.cols(),
          "project_mask_binary: eligibility shape mismatch");
  const long n_eligible = static_cast<long>(eligible.count());
  require(beta >= 0, "project_mask_binary: beta must be non-negative");
  require(beta <= n_eligible, "project_mask_binary: beta exceeds eligible coordinate count");

  // Largest values win, not largest magnitudes: flipping an entry to 1 costs
  // (1-z)^2 - z^2 = 1 - 2z, which decreases in z.
  std::vector<detail::Ranked> ranked;
  ranked.reserve(static_cast<std::size_t>(n_eligible));
  const double* z = Z.data();
  const bool* e = eligible.data();
  for (Index i = 0; i < Z.size(); ++i)
    if (e[i]) ranked.push_back({z[i], i});
  detail::rank_sort(ranked);

  Projected out;
  out.values = Matrix::Zero(Z.rows(), Z.cols());
  out.kept = BoolMatrix::Constant(Z.rows(), Z.cols(), false);
  for (long k = 0; k < beta; ++k) {
    const Index i = ranked[static_cast<std::size_t>(k)].idx;
    out.values.data()[i] = 1.0;
    out.kept.data()[i] = true;
  }
  return out;
}

namespace {

// Walks all k-subsets of {0..n-1} in lexicographic order.
class Combinations {
 public:
  Combinations(long n, long k) : n_(n), k_(k), idx_(static_cast<std::size_t>(k)) {
    for (long i = 0; i < k; ++i) idx_[static_cast<std::size_t>(i)] = i;
    done_ = k > n;
  }

  bool done() const { return done_; }
  const std::vector<long>& current() const { return idx_; }

  void next() {
    if (k_ == 0) {
      done_ = true;
      return;
    }
    long i = k_ - 1;
    while (i >= 0 && idx_[static_cast<std::size_t>(i)] == n_ - k_ + i) --i;
    if (i < 0) {
      done_ = true;
      return;
    }
    ++idx_[static_cast<std::size_t>(i)];
    for (long j = i + 1; j < k_; ++j)
      idx_[static_cast<std::size_t>(j)] = idx_[static_cast<std::size_t>(j - 1)] + 1;
  }

 private:
  long n_, k_;
  std::vector<long> idx_;
  bool done_;
};

}  // namespace

Matrix oracle_project(const Matrix& Z, long budget, ProjectionKind kind, const BoolMatrix& eligible) {
  require(budget >= 0, "oracle_project: negative budget");

  if (kind == ProjectionKind::column || kind == ProjectionKind::filter) {
    const GroupAxis axis = (kind == ProjectionKind::column) ? GroupAxis::column : GroupAxis::filter;
    const std::vector<Index> groups = fully_eligible_groups(eligible, axis);
    const long n = static_cast<long>(groups.size());
    require(n <= 20, "oracle_project: instance too large for enumeration");
    require(budget <= n, "oracle_project: budget exceeds eligible groups");

    double best = std::numeric_limits<double>::infinity();
    Matrix best_mat;
    for (Combinations c(n, budget); !c.done(); c.next()) {
      Matrix cand = Matrix::Zero(Z.rows(), Z.cols());
      for (long pick : c.current()) {
        const Index g = groups[static_cast<std::size_t>(pick)];
        if (axis == GroupAxis::column)
          cand.col(g) = Z.col(g);
        else
          cand.row(g) = Z.row(g);
      }
      const double d = sq_distance(cand, Z);
      if (d < best) {
        best = d;
        best_mat = cand;
      }
    }
    return best_mat;
  }

  // irregular / mask: enumerate coordinate subsets
  std::vector<Index> coords;
  const bool* e = eligible.data();
  for (Index i = 0; i < Z.size(); ++i)
    if (e[i]) coords.push_back(i);
  const long n = static_cast<long>(coords.size());
  require(n <= 20, "oracle_project: instance too large for enumeration");
  require(budget <= n, "oracle_project: budget exceeds eligible coordinates");

  double best = std::numeric_limits<double>::infinity();
  Matrix best_mat;
  for (Combinations c(n, budget); !c.done(); c.next()) {
    Matrix cand = Matrix::Zero(Z.rows(), Z.cols());
    for (long pick : c.current()) {
      const Index i = coords[static_cast<std::size_t>(pick)];
      cand.data()[i] = (kind == ProjectionKind::mask) ? 1.0 : Z.data()[i];
    }
    const double d = sq_distance(cand, Z);
    if (d < best) {
      best = d;
      best_mat = cand;
    }
  }
  return best_mat;
}

SparsityBudget resolve_budgets(PruningKind kind, double alpha_pct, double beta_pct,
                               const SupportSet& free_support, const SupportSet& past_support,
                               bool with_mask) {
  require(alpha_pct >= 0.0 && alpha_pct <= 100.0, "alpha percentage out of [0, 100]");
  require(beta_pct >= 0.0 && beta_pct <= 100.0, "beta percentage out of [0, 100]");

  SparsityBudget b;
  const std::size_t layers = free_support.layer_count();
  for (std::size_t l = 0; l < layers; ++l) {
    const BoolMatrix& free = free_support.layers[l];
    long eligible_count;
    long layer_total;
    if (kind == PruningKind::irregular) {
      layer_total = static_cast<long>(free.size());
      eligible_count = static_cast<long>(free.count());
    } else {
      const GroupAxis axis =
          (kind == PruningKind::column) ? GroupAxis::column : GroupAxis::filter;
      layer_total = (axis == GroupAxis::column) ? static_cast<long>(free.cols())
                                                : static_cast<long>(free.rows());
      eligible_count = static_cast<long>(fully_eligible_groups(free, axis).size());
    }
    long alpha = std::lround(alpha_pct / 100.0 * static_cast<double>(layer_total));
    alpha = std::clamp(alpha, 0L, eligible_count);
    if (alpha_pct > 0.0 && eligible_count >= 1 && alpha < 1) alpha = 1;
    b.alpha.push_back(alpha);

    if (with_mask) {
      const long past_count = past_support.count(l);
      long beta = std::lround(beta_pct / 100.0 * static_cast<double>(past_count));
      beta = std::clamp(beta, 0L, past_count);
      if (beta_pct > 0.0 && past_count >= 1 && beta < 1) beta = 1;
      b.beta.push_back(beta);
    }
  }
  return b;
}

}  // namespace lps

#include "lps/partition.hpp"

#include "lps/rng.hpp"

#include <cmath>
#include <numeric>

namespace lps {

namespace {

std::string coord_str(std::size_t layer, Index i, Index j) {
  return "layer " + std::to_string(layer) + " (" + std::to_string(i) + ", " + std::to_string(j) +
         ")";
}

// first coordinate holding a nonzero value outside the allowed bitmap
Coord first_stray_value(const std::vector<Matrix>& values, const SupportSet& allowed) {
  for (std::size_t l = 0; l < values.size(); ++l)
    for (Index j = 0; j < values[l].cols(); ++j)
      for (Index i = 0; i < values[l].rows(); ++i)
        if (values[l](i, j) != 0.0 && !allowed.layers[l](i, j))
          return {static_cast<long>(l), i, j};
  return {};
}

void check_slice_shapes(const PartitionLedger& ledger, const TaskSlice& slice) {
  require(slice.weights.size() == ledger.layer_count(), "slice: weight layer count mismatch");
  require(slice.weight_support.layer_count() == ledger.layer_count(),
          "slice: weight support layer count mismatch");
  require(slice.mask_support.layer_count() == ledger.layer_count(),
          "slice: mask support layer count mismatch");
  require(slice.masks.empty() || slice.masks.size() == ledger.layer_count(),
          "slice: mask layer count mismatch");
  for (std::size_t l = 0; l < ledger.layer_count(); ++l) {
    const Index r = ledger.accumulated[l].rows();
    const Index c = ledger.accumulated[l].cols();
    require(slice.weights[l].rows() == r && slice.weights[l].cols() == c,
            "slice: weight shape mismatch at layer " + std::to_string(l));
    require(slice.weight_support.layers[l].rows() == r &&
                slice.weight_support.layers[l].cols() == c,
            "slice: weight support shape mismatch at layer " + std::to_string(l));
    require(slice.mask_support.layers[l].rows() == r && slice.mask_support.layers[l].cols() == c,
            "slice: mask support shape mismatch at layer " + std::to_string(l));
    if (!slice.masks.empty())
      require(slice.masks[l].rows() == r && slice.masks[l].cols() == c,
              "slice: mask shape mismatch at layer " + std::to_string(l));
  }
}

// masks must be exactly 1.0 on their support and exactly 0.0 elsewhere
Coord first_bad_mask_entry(const TaskSlice& slice) {
  for (std::size_t l = 0; l < slice.masks.size(); ++l)
    for (Index j = 0; j < slice.masks[l].cols(); ++j)
      for (Index i = 0; i < slice.masks[l].rows(); ++i) {
        const double m = slice.masks[l](i, j);
        const double want = slice.mask_support.layers[l](i, j) ? 1.0 : 0.0;
        if (m != want) return {static_cast<long>(l), i, j};
      }
  return {};
}

}  // namespace

PartitionLedger make_ledger(const std::vector<Matrix>& zero_weights) {
  require(!zero_weights.empty(), "ledger: need at least one layer");
  PartitionLedger ledger;
  long capacity = 0;
  for (const Matrix& w : zero_weights) {
    ledger.accumulated.push_back(Matrix::Zero(w.rows(), w.cols()));
    capacity += static_cast<long>(w.size());
  }
  ledger.used_support = SupportSet::empty_like(zero_weights);
  ledger.reserved = SupportSet::empty_like(zero_weights);
  ledger.total_capacity = capacity;
  return ledger;
}

void reserve_capacity(PartitionLedger& ledger, double fraction, std::uint64_t seed) {
  require(fraction > 0.0 && fraction <= 1.0, "reserve_capacity: fraction must be in (0, 1]");
  require(ledger.slices.empty(), "reserve_capacity: must run before any commit");
  for (std::size_t l = 0; l < ledger.layer_count(); ++l) {
    BoolMatrix& res = ledger.reserved.layers[l];
    res.setConstant(false);
    const long total = static_cast<long>(res.size());
    const long withhold = std::lround((1.0 - fraction) * static_cast<double>(total));
    if (withhold == 0) continue;
    std::vector<Index> order(static_cast<std::size_t>(total));
    std::iota(order.begin(), order.end(), Index{0});
    Rng rng(derive_seed(seed, "reserve", l));
    rng.shuffle(order);
    for (long k = 0; k < withhold; ++k) res.data()[order[static_cast<std::size_t>(k)]] = true;
  }
}

std::vector<Matrix> prefix_accumulated(const PartitionLedger& ledger, int task_id) {
  std::vector<Matrix> sum;
  sum.reserve(ledger.layer_count());
  for (const Matrix& a : ledger.accumulated) sum.push_back(Matrix::Zero(a.rows(), a.cols()));
  for (const TaskSlice& s : ledger.slices) {
    if (s.task_id >= task_id) continue;
    for (std::size_t l = 0; l < sum.size(); ++l) sum[l] += s.weights[l];
  }
  return sum;
}

std::vector<Matrix> effective_weights(const PartitionLedger& ledger, const TaskSlice& slice) {
  check_slice_shapes(ledger, slice);
  if (slice.masks.empty()) return slice.weights;
  std::vector<Matrix> past = prefix_accumulated(ledger, slice.task_id);
  std::vector<Matrix> eff;
  eff.reserve(past.size());
  for (std::size_t l = 0; l < past.size(); ++l)
    eff.push_back(slice.weights[l] + slice.masks[l].cwiseProduct(past[l]));
  return eff;
}

void commit_task(PartitionLedger& ledger, const TaskSlice& slice) {
  check_slice_shapes(ledger, slice);
  require(slice.task_id == static_cast<int>(ledger.slices.size()) + 1,
          "commit_task: expected task " + std::to_string(ledger.slices.size() + 1) + ", got " +
              std::to_string(slice.task_id));

  Coord stray = first_stray_value(slice.weights, slice.weight_support);
  require(!stray.valid(), "commit_task: weight outside its support at " +
                              coord_str(static_cast<std::size_t>(stray.layer), stray.row,
                                        stray.col));
  if (!slice.masks.empty()) {
    Coord bad = first_bad_mask_entry(slice);
    require(!bad.valid(),
            "commit_task: mask entry not matching its support at " +
                coord_str(static_cast<std::size_t>(bad.layer), bad.row, bad.col));
  }

  Coord self = first_overlap(slice.weight_support, slice.mask_support);
  require(!self.valid(), "commit_task: weight and mask supports intersect at " +
                             coord_str(static_cast<std::size_t>(self.layer), self.row, self.col));

  Coord clash = first_overlap(slice.weight_support, ledger.used_support);
  require(!clash.valid(),
          "commit_task: weight support overlaps a committed task at " +
              coord_str(static_cast<std::size_t>(clash.layer), clash.row, clash.col));

  Coord held = first_overlap(slice.weight_support, ledger.reserved);
  require(!held.valid(), "commit_task: weight support enters reserved capacity at " +
                             coord_str(static_cast<std::size_t>(held.layer), held.row, held.col));

  require(subset_of(slice.mask_support, ledger.used_support),
          "commit_task: mask support reaches outside committed capacity");

  for (std::size_t l = 0; l < ledger.layer_count(); ++l) ledger.accumulated[l] += slice.weights[l];
  ledger.used_support = set_union(ledger.used_support, slice.weight_support);
  ledger.slices.push_back(slice);
}

SupportSet free_support(const PartitionLedger& ledger) {
  return set_complement(set_union(ledger.used_support, ledger.reserved));
}

InvariantReport verify_invariants(const PartitionLedger& ledger) {
  InvariantReport report;
  auto fail = [&report](std::string msg) {
    report.pass = false;
    report.failures.push_back(std::move(msg));
  };

  SupportSet seen = SupportSet::empty_like(ledger.accumulated);
  std::vector<Matrix> sum;
  for (const Matrix& a : ledger.accumulated) sum.push_back(Matrix::Zero(a.rows(), a.cols()));

  for (std::size_t k = 0; k < ledger.slices.size(); ++k) {
    const TaskSlice& s = ledger.slices[k];
    const std::string who = "slice " + std::to_string(s.task_id);
    if (s.task_id != static_cast<int>(k) + 1) fail(who + ": out-of-order task id");

    Coord stray = first_stray_value(s.weights, s.weight_support);
    if (stray.valid())
      fail(who + ": weight outside its support at " +
           coord_str(static_cast<std::size_t>(stray.layer), stray.row, stray.col));

    if (!s.masks.empty()) {
      Coord bad = first_bad_mask_entry(s);
      if (bad.valid())
        fail(who + ": mask entry not matching its support at " +
             coord_str(static_cast<std::size_t>(bad.layer), bad.row, bad.col));
    }

    Coord self = first_overlap(s.weight_support, s.mask_support);
    if (self.valid())
      fail(who + ": weight and mask supports intersect at " +
           coord_str(static_cast<std::size_t>(self.layer), self.row, self.col));

    Coord clash = first_overlap(s.weight_support, seen);
    if (clash.valid())
      fail(who + ": weight support overlaps an earlier task at " +
           coord_str(static_cast<std::size_t>(clash.layer), clash.row, clash.col));

    if (!subset_of(s.mask_support, seen))
      fail(who + ": mask support reaches outside earlier tasks' capacity");

    seen = set_union(seen, s.weight_support);
    for (std::size_t l = 0; l < sum.size(); ++l) sum[l] += s.weights[l];
  }

  for (std::size_t l = 0; l < ledger.layer_count(); ++l) {
    if ((seen.layers[l] != ledger.used_support.layers[l]).any()) {
      fail("used support does not equal the union of committed supports at layer " +
           std::to_string(l));
      break;
    }
  }
  for (std::size_t l = 0; l < ledger.layer_count(); ++l) {
    const Matrix diff = (sum[l] - ledger.accumulated[l]).cwiseAbs();
    if (diff.maxCoeff() != 0.0) {
      Index i, j;
      diff.maxCoeff(&i, &j);
      fail("accumulated weights diverge from the slice sum at " + coord_str(l, i, j));
      break;
    }
  }

  Coord held = first_overlap(ledger.used_support, ledger.reserved);
  if (held.valid())
    fail("used support enters reserved capacity at " +
         coord_str(static_cast<std::size_t>(held.layer), held.row, held.col));

  if (ledger.used_support.total() > ledger.total_capacity)
    fail("used support exceeds total capacity");

  return report;
}

}  // namespace lps

#ifndef LPS_SUPPORT_HPP_
#define LPS_SUPPORT_HPP_

#include "lps/types.hpp"

#include <cstddef>
#include <vector>

namespace lps {

// Per-layer allocation bitmaps, one bool per weight coordinate. Supports are
// tracked explicitly rather than inferred from nonzero values: a trained
// weight that lands on 0.0 inside its allocation still belongs to its task.
struct SupportSet {
  std::vector<BoolMatrix> layers;

  SupportSet() = default;
  explicit SupportSet(std::vector<BoolMatrix> l) : layers(std::move(l)) {}

  static SupportSet empty_like(const std::vector<Matrix>& mats) {
    SupportSet s;
    s.layers.reserve(mats.size());
    for (const auto& m : mats) s.layers.push_back(BoolMatrix::Constant(m.rows(), m.cols(), false));
    return s;
  }

  static SupportSet full_like(const std::vector<Matrix>& mats) {
    SupportSet s;
    s.layers.reserve(mats.size());
    for (const auto& m : mats) s.layers.push_back(BoolMatrix::Constant(m.rows(), m.cols(), true));
    return s;
  }

  std::size_t layer_count() const { return layers.size(); }

  long count(std::size_t l) const { return static_cast<long>(layers[l].count()); }

  long total() const {
    long n = 0;
    for (const auto& m : layers) n += static_cast<long>(m.count());
    return n;
  }
};

inline SupportSet set_union(const SupportSet& a, const SupportSet& b) {
  SupportSet out;
  out.layers.reserve(a.layers.size());
  for (std::size_t l = 0; l < a.layers.size(); ++l) out.layers.push_back(a.layers[l] || b.layers[l]);
  return out;
}

inline SupportSet set_intersection(const SupportSet& a, const SupportSet& b) {
  SupportSet out;
  out.layers.reserve(a.layers.size());
  for (std::size_t l = 0; l < a.layers.size(); ++l) out.layers.push_back(a.layers[l] && b.layers[l]);
  return out;
}

inline SupportSet set_complement(const SupportSet& a) {
  SupportSet out;
  out.layers.reserve(a.layers.size());
  for (const auto& m : a.layers) out.layers.push_back(!m);
  return out;
}

inline bool disjoint(const SupportSet& a, const SupportSet& b) {
  for (std::size_t l = 0; l < a.layers.size(); ++l)
    if ((a.layers[l] && b.layers[l]).any()) return false;
  return true;
}

inline bool subset_of(const SupportSet& a, const SupportSet& b) {
  for (std::size_t l = 0; l < a.layers.size(); ++l)
    if ((a.layers[l] && !b.layers[l]).any()) return false;
  return true;
}

// First coordinate where both bitmaps are set; (-1,-1,-1) if disjoint.
struct Coord {
  long layer = -1;
  Index row = -1;
  Index col = -1;
  bool valid() const { return layer >= 0; }
};

inline Coord first_overlap(const SupportSet& a, const SupportSet& b) {
  for (std::size_t l = 0; l < a.layers.size(); ++l) {
    BoolMatrix both = a.layers[l] && b.layers[l];
    for (Index j = 0; j < both.cols(); ++j)
      for (Index i = 0; i < both.rows(); ++i)
        if (both(i, j)) return {static_cast<long>(l), i, j};
  }
  return {};
}

}  // namespace lps

#endif  // LPS_SUPPORT_HPP_

#ifndef LPS_TYPES_HPP_
#define LPS_TYPES_HPP_

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lps {

// All math runs in double precision; weights are plain column-major
// dense matrices in GEMM layout (rows = input size, cols = output size).
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using BoolMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;
using Index = Eigen::Index;

// Flat coordinate convention used everywhere a layer's entries are ordered:
// column-major linear index, i.e. flat = col * rows + row.
inline Index flat_index(Index row, Index col, Index rows) { return col * rows + row; }

// Copies `values` where `keep` is true and writes an exact +0.0 elsewhere.
// select() is used instead of multiplying by a 0/1 matrix so that masked-out
// entries never pick up a negative zero.
inline Matrix keep_where(const BoolMatrix& keep, const Matrix& values) {
  return keep.select(values.array(), 0.0).matrix();
}

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace lps

#endif  // LPS_TYPES_HPP_

#ifndef LPS_GRADCHECK_HPP_
#define LPS_GRADCHECK_HPP_

#include "lps/network.hpp"
#include "lps/types.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace lps {

// Central-difference check of analytic gradients against any scalar
// objective. Each entry pairs a parameter address with its analytic
// gradient; the parameter is perturbed by +-step and restored. Returns
// max over coordinates of |analytic - numeric| / max(1e-12, |analytic| + |numeric|).
double max_relative_gradient_error(const std::function<double()>& objective,
                                   const std::vector<std::pair<double*, double>>& coord_grads,
                                   double step = 1e-5);

// Addresses one scalar parameter of a network. For the bias slot, `layer`
// indexes BiasSet::layers (so layer == L is the head bias) and `col` is
// ignored.
struct ParamCoord {
  enum class Slot { weight, head, bias };
  Slot slot;
  std::size_t layer = 0;
  Index row = 0;
  Index col = 0;
};

// Convenience wrapper over the plain cross-entropy loss. Sampled coordinates
// must lie inside `trainable`, otherwise the analytic gradient is a masked
// zero and the comparison is meaningless.
double finite_difference_check(std::vector<Matrix>& weights, Matrix& head, BiasSet& biases,
                               const Matrix& batch, const Eigen::VectorXi& labels,
                               const TrainableSet& trainable, const std::vector<ParamCoord>& coords,
                               double step = 1e-5);

}  // namespace lps

#endif  // LPS_GRADCHECK_HPP_

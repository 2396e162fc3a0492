#ifndef LPS_ADAM_HPP_
#define LPS_ADAM_HPP_

#include "lps/network.hpp"
#include "lps/types.hpp"

#include <vector>

namespace lps {

// Moment accumulators mirror the parameter shapes. Updates are lazy: a
// coordinate whose gradient is exactly 0.0 is skipped outright, so its
// parameter and accumulators stay bit-identical. That is what keeps frozen
// and never-allocated coordinates untouched without extra bookkeeping.
struct AdamState {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long step = 0;

  std::vector<Matrix> m_weights, v_weights;
  std::vector<Matrix> m_masks, v_masks;
  Matrix m_head, v_head;
  std::vector<Vector> m_biases, v_biases;
};

AdamState make_adam_state(const std::vector<Matrix>& weights, const std::vector<Matrix>& masks,
                          const Matrix& head, const BiasSet& biases, double lr);

// One optimizer step in place. grads.masks may be empty (no mask training);
// frozen feature biases are skipped regardless of their gradient entries.
// Throws on any non-finite gradient, naming the offending block.
void adam_step(std::vector<Matrix>& weights, std::vector<Matrix>& masks, Matrix& head,
               BiasSet& biases, const GradientSet& grads, AdamState& state);

}  // namespace lps

#endif  // LPS_ADAM_HPP_

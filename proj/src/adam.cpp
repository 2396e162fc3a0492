#include "lps/adam.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lps {

AdamState make_adam_state(const std::vector<Matrix>& weights, const std::vector<Matrix>& masks,
                          const Matrix& head, const BiasSet& biases, double lr) {
  require(lr > 0.0, "adam: learning rate must be positive");
  AdamState s;
  s.lr = lr;
  for (const auto& w : weights) {
    s.m_weights.push_back(Matrix::Zero(w.rows(), w.cols()));
    s.v_weights.push_back(Matrix::Zero(w.rows(), w.cols()));
  }
  for (const auto& m : masks) {
    s.m_masks.push_back(Matrix::Zero(m.rows(), m.cols()));
    s.v_masks.push_back(Matrix::Zero(m.rows(), m.cols()));
  }
  s.m_head = Matrix::Zero(head.rows(), head.cols());
  s.v_head = Matrix::Zero(head.rows(), head.cols());
  for (const auto& b : biases.layers) {
    s.m_biases.push_back(Vector::Zero(b.size()));
    s.v_biases.push_back(Vector::Zero(b.size()));
  }
  return s;
}

namespace {

void lazy_block(double* p, const double* g, double* m, double* v, Index n, const AdamState& s,
                double c1, double c2, const std::string& what) {
  for (Index i = 0; i < n; ++i) {
    const double gi = g[i];
    if (gi == 0.0) continue;
    if (!std::isfinite(gi))
      throw std::runtime_error("adam_step: non-finite gradient in " + what);
    m[i] = s.beta1 * m[i] + (1.0 - s.beta1) * gi;
    v[i] = s.beta2 * v[i] + (1.0 - s.beta2) * gi * gi;
    p[i] -= s.lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + s.eps);
  }
}

}  // namespace

void adam_step(std::vector<Matrix>& weights, std::vector<Matrix>& masks, Matrix& head,
               BiasSet& biases, const GradientSet& grads, AdamState& state) {
  require(grads.weights.size() == weights.size(), "adam_step: weight gradient count mismatch");
  require(grads.biases.size() == biases.layers.size(), "adam_step: bias gradient count mismatch");
  require(grads.masks.empty() || grads.masks.size() == masks.size(),
          "adam_step: mask gradient count mismatch");

  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);

  for (std::size_t l = 0; l < weights.size(); ++l) {
    require(grads.weights[l].rows() == weights[l].rows() &&
                grads.weights[l].cols() == weights[l].cols(),
            "adam_step: weight gradient " + std::to_string(l) + " shape mismatch");
    lazy_block(weights[l].data(), grads.weights[l].data(), state.m_weights[l].data(),
               state.v_weights[l].data(), weights[l].size(), state, c1, c2,
               "feature layer " + std::to_string(l));
  }
  for (std::size_t l = 0; l < grads.masks.size(); ++l) {
    require(grads.masks[l].rows() == masks[l].rows() && grads.masks[l].cols() == masks[l].cols(),
            "adam_step: mask gradient " + std::to_string(l) + " shape mismatch");
    lazy_block(masks[l].data(), grads.masks[l].data(), state.m_masks[l].data(),
               state.v_masks[l].data(), masks[l].size(), state, c1, c2,
               "mask layer " + std::to_string(l));
  }
  require(grads.head.rows() == head.rows() && grads.head.cols() == head.cols(),
          "adam_step: head gradient shape mismatch");
  lazy_block(head.data(), grads.head.data(), state.m_head.data(), state.v_head.data(), head.size(),
             state, c1, c2, "head");

  const std::size_t head_bias = biases.layers.size() - 1;
  for (std::size_t l = 0; l < biases.layers.size(); ++l) {
    if (biases.frozen && l < head_bias) continue;
    require(grads.biases[l].size() == biases.layers[l].size(),
            "adam_step: bias gradient " + std::to_string(l) + " size mismatch");
    lazy_block(biases.layers[l].data(), grads.biases[l].data(), state.m_biases[l].data(),
               state.v_biases[l].data(), biases.layers[l].size(), state, c1, c2,
               "bias " + std::to_string(l));
  }
}

}  // namespace lps

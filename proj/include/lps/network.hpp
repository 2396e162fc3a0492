#ifndef LPS_NETWORK_HPP_
#define LPS_NETWORK_HPP_

#include "lps/rng.hpp"
#include "lps/support.hpp"
#include "lps/types.hpp"

#include <vector>

namespace lps {

// Layer dimensions [d, h_1, ..., h_L, classes]. Feature layer l (0-based,
// l < L) multiplies rows=dims[l] inputs into cols=dims[l+1] outputs; the head
// is the final dims[L] x classes matrix, owned per task by the trainer.
struct NetworkSpec {
  std::vector<Index> layer_dims;

  std::size_t feature_layer_count() const { return layer_dims.size() - 2; }
  Index input_dim() const { return layer_dims.front(); }
  Index class_count() const { return layer_dims.back(); }
  Index feature_rows(std::size_t l) const { return layer_dims[l]; }
  Index feature_cols(std::size_t l) const { return layer_dims[l + 1]; }
  Index head_rows() const { return layer_dims[layer_dims.size() - 2]; }

  // parameter capacity of the feature extractor; the head is not counted
  long feature_param_count() const;
  void validate() const;

  std::vector<Matrix> zero_feature_weights() const;
};

// Per-layer biases: entries 0..L-1 belong to the feature layers, the last
// entry to the active head. `frozen` freezes the feature entries (they are
// learned on the first task only); the head entry always trains with its
// task's head.
struct BiasSet {
  std::vector<Vector> layers;
  bool frozen = false;
};

// Gradients shaped exactly like the parameters they address. `masks` stays
// empty unless the caller trains knowledge-sharing masks; `biases` mirrors
// BiasSet::layers (feature biases first, head bias last).
struct GradientSet {
  std::vector<Matrix> weights;
  std::vector<Matrix> masks;
  Matrix head;
  std::vector<Vector> biases;
};

// Which coordinates may move. Weight coordinates come as explicit per-layer
// bitmaps; the head and the bias blocks toggle as wholes.
struct TrainableSet {
  SupportSet weights;
  bool head = true;
  bool feature_biases = true;
  bool head_bias = true;
};

// acts[0] is the batch, acts[l] the post-ReLU activation of feature layer l.
struct ForwardCache {
  std::vector<Matrix> acts;
};

// Batch is one row per sample; returns one logit row per sample.
Matrix forward(const std::vector<Matrix>& weights, const Matrix& head, const BiasSet& biases,
               const Matrix& batch, ForwardCache* cache = nullptr);

// Mean softmax cross-entropy; writes d(loss)/d(logits) when dlogits given.
double softmax_cross_entropy(const Matrix& logits, const Eigen::VectorXi& labels,
                             Matrix* dlogits = nullptr);

double loss_value(const std::vector<Matrix>& weights, const Matrix& head, const BiasSet& biases,
                  const Matrix& batch, const Eigen::VectorXi& labels);

// Backprop through the stack. Gradient entries outside `trainable` are
// exactly 0.0, never merely small.
double loss_and_grads(const std::vector<Matrix>& weights, const Matrix& head, const BiasSet& biases,
                      const Matrix& batch, const Eigen::VectorXi& labels,
                      const TrainableSet& trainable, GradientSet& grads);

// Uniform in [-sqrt(6/(rows+cols)), +sqrt(6/(rows+cols))], drawn column-major.
Matrix init_weight(Index rows, Index cols, Rng& rng);

}  // namespace lps

#endif  // LPS_NETWORK_HPP_

#include "lps/network.hpp"

#include <cmath>
#include <string>

namespace lps {

long NetworkSpec::feature_param_count() const {
  long m = 0;
  for (std::size_t l = 0; l < feature_layer_count(); ++l)
    m += static_cast<long>(feature_rows(l)) * static_cast<long>(feature_cols(l));
  return m;
}

void NetworkSpec::validate() const {
  require(layer_dims.size() >= 2, "network: need at least input and class dimensions");
  for (Index d : layer_dims) require(d > 0, "network: layer dimensions must be positive");
}

std::vector<Matrix> NetworkSpec::zero_feature_weights() const {
  std::vector<Matrix> w;
  w.reserve(feature_layer_count());
  for (std::size_t l = 0; l < feature_layer_count(); ++l)
    w.push_back(Matrix::Zero(feature_rows(l), feature_cols(l)));
  return w;
}

namespace {

void check_stack(const std::vector<Matrix>& weights, const Matrix& head, const BiasSet& biases,
                 const Matrix& batch) {
  require(batch.rows() >= 1, "forward: empty batch");
  require(biases.layers.size() == weights.size() + 1,
          "forward: need one bias vector per feature layer plus the head");
  Index width = batch.cols();
  for (std::size_t l = 0; l < weights.size(); ++l) {
    require(weights[l].rows() == width, "forward: feature layer " + std::to_string(l) +
                                            " expects " + std::to_string(weights[l].rows()) +
                                            " inputs, got " + std::to_string(width));
    require(biases.layers[l].size() == weights[l].cols(),
            "forward: bias " + std::to_string(l) + " size mismatch");
    width = weights[l].cols();
  }
  require(head.rows() == width, "forward: head expects " + std::to_string(head.rows()) +
                                    " inputs, got " + std::to_string(width));
  require(biases.layers.back().size() == head.cols(), "forward: head bias size mismatch");
}

}  // namespace

Matrix forward(const std::vector<Matrix>& weights, const Matrix& head, const BiasSet& biases,
               const Matrix& batch, ForwardCache* cache) {
  check_stack(weights, head, biases, batch);
  if (cache) {
    cache->acts.clear();
    cache->acts.reserve(weights.size() + 1);
    cache->acts.push_back(batch);
  }
  Matrix h = batch;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    h = ((h * weights[l]).rowwise() + biases.layers[l].transpose()).cwiseMax(0.0);
    if (cache) cache->acts.push_back(h);
  }
  return (h * head).rowwise() + biases.layers.back().transpose();
}

double softmax_cross_entropy(const Matrix& logits, const Eigen::VectorXi& labels,
                             Matrix* dlogits) {
  const Index n = logits.rows();
  const Index classes = logits.cols();
  require(n >= 1, "loss: empty batch");
  require(labels.size() == n, "loss: one label per sample required");
  for (Index i = 0; i < n; ++i)
    require(labels(i) >= 0 && labels(i) < classes,
            "loss: label " + std::to_string(labels(i)) + " out of range for " +
                std::to_string(classes) + " classes");

  const Vector row_max = logits.rowwise().maxCoeff();
  const Matrix shifted = logits.colwise() - row_max;
  const Matrix expv = shifted.array().exp().matrix();
  const Vector sums = expv.rowwise().sum();

  double loss = 0.0;
  for (Index i = 0; i < n; ++i) loss += std::log(sums(i)) - shifted(i, labels(i));
  loss /= static_cast<double>(n);

  if (dlogits) {
    *dlogits = (expv.array().colwise() / sums.array()).matrix();
    for (Index i = 0; i < n; ++i) (*dlogits)(i, labels(i)) -= 1.0;
    *dlogits /= static_cast<double>(n);
  }
  return loss;
}

double loss_value(const std::vector<Matrix>& weights, const Matrix& head, const BiasSet& biases,
                  const Matrix& batch, const Eigen::VectorXi& labels) {
  return softmax_cross_entropy(forward(weights, head, biases, batch), labels);
}

double loss_and_grads(const std::vector<Matrix>& weights, const Matrix& head, const BiasSet& biases,
                      const Matrix& batch, const Eigen::VectorXi& labels,
                      const TrainableSet& trainable, GradientSet& grads) {
  const std::size_t L = weights.size();
  require(trainable.weights.layer_count() == L, "loss_and_grads: trainable bitmap count mismatch");
  for (std::size_t l = 0; l < L; ++l)
    require(trainable.weights.layers[l].rows() == weights[l].rows() &&
                trainable.weights.layers[l].cols() == weights[l].cols(),
            "loss_and_grads: trainable bitmap " + std::to_string(l) + " shape mismatch");

  ForwardCache cache;
  const Matrix logits = forward(weights, head, biases, batch, &cache);
  Matrix dlogits;
  const double loss = softmax_cross_entropy(logits, labels, &dlogits);

  grads.weights.assign(L, Matrix());
  grads.masks.clear();
  grads.biases.assign(L + 1, Vector());

  grads.head = trainable.head ? Matrix(cache.acts[L].transpose() * dlogits)
                              : Matrix::Zero(head.rows(), head.cols());
  grads.biases[L] = trainable.head_bias ? Vector(dlogits.colwise().sum().transpose())
                                        : Vector::Zero(head.cols());

  const bool bias_trainable = trainable.feature_biases && !biases.frozen;
  Matrix g = dlogits * head.transpose();
  for (std::size_t l = L; l-- > 0;) {
    // ReLU subgradient at 0 is taken as 0, so the indicator is acts > 0
    const Matrix da = (cache.acts[l + 1].array() > 0.0).select(g.array(), 0.0).matrix();
    grads.weights[l] = keep_where(trainable.weights.layers[l],
                                  Matrix(cache.acts[l].transpose() * da));
    grads.biases[l] = bias_trainable ? Vector(da.colwise().sum().transpose())
                                     : Vector::Zero(weights[l].cols());
    if (l > 0) g = da * weights[l].transpose();
  }
  return loss;
}

Matrix init_weight(Index rows, Index cols, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Matrix w(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) w(i, j) = rng.uniform(-bound, bound);
  return w;
}

}  // namespace lps

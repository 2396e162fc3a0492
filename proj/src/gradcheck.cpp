#include "lps/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace lps {

double max_relative_gradient_error(const std::function<double()>& objective,
                                   const std::vector<std::pair<double*, double>>& coord_grads,
                                   double step) {
  require(!coord_grads.empty(), "gradient check: no coordinates sampled");
  require(step > 0.0, "gradient check: step must be positive");
  double worst = 0.0;
  for (const auto& [p, analytic] : coord_grads) {
    const double saved = *p;
    *p = saved + step;
    const double up = objective();
    *p = saved - step;
    const double down = objective();
    *p = saved;
    const double numeric = (up - down) / (2.0 * step);
    const double rel =
        std::abs(analytic - numeric) / std::max(1e-12, std::abs(analytic) + std::abs(numeric));
    worst = std::max(worst, rel);
  }
  return worst;
}

double finite_difference_check(std::vector<Matrix>& weights, Matrix& head, BiasSet& biases,
                               const Matrix& batch, const Eigen::VectorXi& labels,
                               const TrainableSet& trainable, const std::vector<ParamCoord>& coords,
                               double step) {
  GradientSet grads;
  loss_and_grads(weights, head, biases, batch, labels, trainable, grads);

  std::vector<std::pair<double*, double>> pairs;
  pairs.reserve(coords.size());
  for (const ParamCoord& c : coords) {
    switch (c.slot) {
      case ParamCoord::Slot::weight:
        pairs.emplace_back(&weights[c.layer](c.row, c.col), grads.weights[c.layer](c.row, c.col));
        break;
      case ParamCoord::Slot::head:
        pairs.emplace_back(&head(c.row, c.col), grads.head(c.row, c.col));
        break;
      case ParamCoord::Slot::bias:
        pairs.emplace_back(&biases.layers[c.layer](c.row), grads.biases[c.layer](c.row));
        break;
    }
  }
  const auto objective = [&] { return loss_value(weights, head, biases, batch, labels); };
  return max_relative_gradient_error(objective, pairs, step);
}

}  // namespace lps

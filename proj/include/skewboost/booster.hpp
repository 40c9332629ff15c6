#ifndef SKEWBOOST_BOOSTER_HPP
#define SKEWBOOST_BOOSTER_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "skewboost/dataset.hpp"
#include "skewboost/loss.hpp"
#include "skewboost/tree.hpp"

namespace skewboost {

struct TrainConfig {
  int num_rounds = 10;
  double learning_rate = 0.3;
  int max_depth = 6;
  double reg_lambda = 1.0;        // L2 penalty on leaf weights
  double min_split_gain = 0.0;
  double min_child_hessian = 1.0; // minimum summed hessian per child
  double base_score = 0.0;        // initial raw logit, not a probability
  LossParams loss;
  std::int64_t seed = 0;

  void validate() const;
};

// Additive ensemble over regression trees. Leaf weights are stored with the
// learning rate already folded in; prediction is base_score plus the sum of
// routed leaf weights.
struct BoostedModel {
  double base_score = 0.0;
  LossParams loss_params;
  std::size_t feature_count = 0;
  std::vector<Tree> trees;
};

// Gain of splitting a node into (left, right):
//   0.5 * [GL^2/(HL+lambda) + GR^2/(HR+lambda) - (GL+GR)^2/(HL+HR+lambda)]
//   - min_split_gain
// Denominators below 1e-16 contribute zero.
double split_gain(double grad_left, double hess_left,
                  double grad_right, double hess_right,
                  double reg_lambda, double min_split_gain);

// Grows one tree against fixed per-instance gradients and hessians by exact
// greedy search over midpoint thresholds. Leaf weights are -G/(H+lambda),
// before shrinkage.
Tree grow_tree(const Matrix& features, std::span<const GradHess> grad_hess,
               const TrainConfig& config);

BoostedModel train(const Dataset& data, const TrainConfig& config);

std::vector<double> predict_raw(const BoostedModel& model, const Matrix& features);
std::vector<double> predict_sigmoid(const BoostedModel& model, const Matrix& features);
// Label 1 iff raw score > 0; a raw score of exactly 0 maps to label 0.
std::vector<int> predict_determine(const BoostedModel& model, const Matrix& features);
// One row per instance: [1,0] for label 0, [0,1] for label 1.
Matrix predict_two_classes(const BoostedModel& model, const Matrix& features);

// JSON model document; numbers round-trip bit-exactly.
std::string serialize_model(const BoostedModel& model);
BoostedModel deserialize_model(const std::string& text);

void save_model(const BoostedModel& model, const std::filesystem::path& path);
BoostedModel load_model(const std::filesystem::path& path);

}  // namespace skewboost

#endif  // SKEWBOOST_BOOSTER_HPP

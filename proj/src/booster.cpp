#include "skewboost/booster.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "skewboost/errors.hpp"

namespace skewboost {

namespace {

using nlohmann::json;

// Below this the quadratic objective is treated as flat: no leaf movement,
// no gain contribution.
constexpr double kMinDenominator = 1e-16;

double gain_term(double grad_sum, double hess_sum, double reg_lambda) {
  double denom = hess_sum + reg_lambda;
  if (denom < kMinDenominator) {
    return 0.0;
  }
  return grad_sum * grad_sum / denom;
}

struct BestSplit {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

// Exact greedy scan. The summation contract here is observable through the
// split-oracle tests: per feature, rows are ordered by (value, original row
// index), prefix gradient/hessian sums accumulate in that order, and the
// feature totals come from the same ordered pass, so any reimplementation
// that follows the same order reproduces the gains bit for bit.
BestSplit find_best_split(const Matrix& features,
                          std::span<const GradHess> grad_hess,
                          const std::vector<std::size_t>& rows,
                          const TrainConfig& config) {
  BestSplit best;
  std::size_t count = rows.size();
  std::vector<std::pair<double, std::size_t>> order(count);
  for (std::size_t f = 0; f < features.cols(); ++f) {
    for (std::size_t i = 0; i < count; ++i) {
      order[i] = {features.at(rows[i], f), rows[i]};
    }
    std::sort(order.begin(), order.end());

    double grad_total = 0.0;
    double hess_total = 0.0;
    for (const auto& [value, row] : order) {
      grad_total += grad_hess[row].grad;
      hess_total += grad_hess[row].hess;
    }

    double grad_left = 0.0;
    double hess_left = 0.0;
    for (std::size_t i = 0; i + 1 < count; ++i) {
      grad_left += grad_hess[order[i].second].grad;
      hess_left += grad_hess[order[i].second].hess;
      double value = order[i].first;
      double next = order[i + 1].first;
      if (value == next) {
        continue;  // boundary inside a run of equal values
      }
      double grad_right = grad_total - grad_left;
      double hess_right = hess_total - hess_left;
      if (hess_left < config.min_child_hessian ||
          hess_right < config.min_child_hessian) {
        continue;
      }
      double gain = split_gain(grad_left, hess_left, grad_right, hess_right,
                               config.reg_lambda, config.min_split_gain);
      if (gain > 0.0 && (!best.found || gain > best.gain)) {
        // Midpoint threshold; if rounding pushes it onto either neighbour,
        // fall back to the left value so `<=` still routes correctly.
        double threshold = 0.5 * value + 0.5 * next;
        if (!(value <= threshold && threshold < next)) {
          threshold = value;
        }
        best = {true, static_cast<int>(f), threshold, gain};
      }
    }
  }
  return best;
}

struct NodeWork {
  int node_id;
  int depth;
  std::vector<std::size_t> rows;  // ascending original row order
};

json node_to_json(const Tree& tree, int index) {
  if (index < 0 || static_cast<std::size_t>(index) >= tree.nodes.size()) {
    throw InvalidInputError("tree node index out of range during serialization");
  }
  const TreeNode& node = tree.nodes[static_cast<std::size_t>(index)];
  json out;
  if (node.is_leaf()) {
    out["leaf_weight"] = node.leaf_weight;
  } else {
    out["feature_index"] = node.feature_index;
    out["threshold"] = node.threshold;
    out["left"] = node_to_json(tree, node.left);
    out["right"] = node_to_json(tree, node.right);
  }
  return out;
}

int json_to_node(const json& record, Tree& tree, std::size_t feature_count) {
  if (!record.is_object()) {
    throw ParseError("tree node must be a JSON object");
  }
  int index = static_cast<int>(tree.nodes.size());
  tree.nodes.emplace_back();
  if (record.contains("leaf_weight")) {
    double weight = record.at("leaf_weight").get<double>();
    if (!std::isfinite(weight)) {
      throw ParseError("leaf weight must be finite");
    }
    tree.nodes[static_cast<std::size_t>(index)].leaf_weight = weight;
  } else {
    int feature = record.at("feature_index").get<int>();
    if (feature < 0 || static_cast<std::size_t>(feature) >= feature_count) {
      throw ParseError("feature_index " + std::to_string(feature) +
                       " out of range for " + std::to_string(feature_count) +
                       " features");
    }
    double threshold = record.at("threshold").get<double>();
    if (!std::isfinite(threshold)) {
      throw ParseError("threshold must be finite");
    }
    int left = json_to_node(record.at("left"), tree, feature_count);
    int right = json_to_node(record.at("right"), tree, feature_count);
    TreeNode& node = tree.nodes[static_cast<std::size_t>(index)];
    node.feature_index = feature;
    node.threshold = threshold;
    node.left = left;
    node.right = right;
  }
  return index;
}

}  // namespace

void TrainConfig::validate() const {
  if (num_rounds < 1) {
    throw InvalidInputError("num_rounds must be at least 1");
  }
  if (!(std::isfinite(learning_rate) && learning_rate > 0.0 &&
        learning_rate <= 1.0)) {
    throw InvalidInputError("learning_rate must lie in (0, 1]");
  }
  if (max_depth < 1) {
    throw InvalidInputError("max_depth must be at least 1");
  }
  if (!(std::isfinite(reg_lambda) && reg_lambda >= 0.0)) {
    throw InvalidInputError("reg_lambda must be a finite value >= 0");
  }
  if (!(std::isfinite(min_split_gain) && min_split_gain >= 0.0)) {
    throw InvalidInputError("min_split_gain must be a finite value >= 0");
  }
  if (!(std::isfinite(min_child_hessian) && min_child_hessian >= 0.0)) {
    throw InvalidInputError("min_child_hessian must be a finite value >= 0");
  }
  if (!std::isfinite(base_score)) {
    throw InvalidInputError("base_score must be finite");
  }
  loss.validate();
}

double split_gain(double grad_left, double hess_left, double grad_right,
                  double hess_right, double reg_lambda,
                  double min_split_gain) {
  return 0.5 * (gain_term(grad_left, hess_left, reg_lambda) +
                gain_term(grad_right, hess_right, reg_lambda) -
                gain_term(grad_left + grad_right, hess_left + hess_right,
                          reg_lambda)) -
         min_split_gain;
}

Tree grow_tree(const Matrix& features, std::span<const GradHess> grad_hess,
               const TrainConfig& config) {
  config.validate();
  if (features.rows() != grad_hess.size()) {
    throw DimensionError("feature rows and gradient count differ");
  }
  if (grad_hess.empty()) {
    throw InvalidInputError("cannot grow a tree without instances");
  }

  Tree tree;
  tree.nodes.emplace_back();
  std::deque<NodeWork> pending;
  {
    std::vector<std::size_t> all(features.rows());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    pending.push_back({0, 0, std::move(all)});
  }

  while (!pending.empty()) {
    NodeWork work = std::move(pending.front());
    pending.pop_front();

    // Covered-instance totals, summed in ascending original row order.
    double grad_sum = 0.0;
    double hess_sum = 0.0;
    for (std::size_t row : work.rows) {
      grad_sum += grad_hess[row].grad;
      hess_sum += grad_hess[row].hess;
    }
    double denom = hess_sum + config.reg_lambda;
    tree.nodes[static_cast<std::size_t>(work.node_id)].leaf_weight =
        denom < kMinDenominator ? 0.0 : -grad_sum / denom;

    if (work.depth >= config.max_depth || work.rows.size() < 2) {
      continue;
    }
    BestSplit best = find_best_split(features, grad_hess, work.rows, config);
    if (!best.found) {
      continue;
    }

    NodeWork left_work{static_cast<int>(tree.nodes.size()), work.depth + 1, {}};
    NodeWork right_work{left_work.node_id + 1, work.depth + 1, {}};
    for (std::size_t row : work.rows) {
      auto& side = features.at(row, static_cast<std::size_t>(best.feature)) <=
                           best.threshold
                       ? left_work.rows
                       : right_work.rows;
      side.push_back(row);
    }
    tree.nodes.emplace_back();
    tree.nodes.emplace_back();
    TreeNode& node = tree.nodes[static_cast<std::size_t>(work.node_id)];
    node.feature_index = best.feature;
    node.threshold = best.threshold;
    node.left = left_work.node_id;
    node.right = right_work.node_id;
    node.leaf_weight = 0.0;
    pending.push_back(std::move(left_work));
    pending.push_back(std::move(right_work));
  }
  return tree;
}

BoostedModel train(const Dataset& data, const TrainConfig& config) {
  config.validate();
  data.validate();
  if (data.size() == 0) {
    throw InvalidInputError("cannot train on an empty dataset");
  }
  if (data.features.cols() == 0) {
    throw InvalidInputError("training data needs at least one feature");
  }

  BoostedModel model;
  model.base_score = config.base_score;
  model.loss_params = config.loss;
  model.feature_count = data.features.cols();
  model.trees.reserve(static_cast<std::size_t>(config.num_rounds));

  std::vector<double> raw(data.size(), config.base_score);
  for (int round = 0; round < config.num_rounds; ++round) {
    auto grads = batch_grad_hess(data.labels, raw, config.loss);
    Tree tree = grow_tree(data.features, grads, config);
    for (TreeNode& node : tree.nodes) {
      if (node.is_leaf()) {
        node.leaf_weight *= config.learning_rate;
      }
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
      raw[i] += tree.predict_row(data.features.row(i));
    }
    model.trees.push_back(std::move(tree));
  }
  return model;
}

std::vector<double> predict_raw(const BoostedModel& model,
                                const Matrix& features) {
  if (features.cols() != model.feature_count) {
    throw DimensionError("model expects " +
                         std::to_string(model.feature_count) +
                         " features, got " + std::to_string(features.cols()));
  }
  std::vector<double> out(features.rows(), model.base_score);
  for (std::size_t r = 0; r < features.rows(); ++r) {
    for (const Tree& tree : model.trees) {
      out[r] += tree.predict_row(features.row(r));
    }
  }
  return out;
}

std::vector<double> predict_sigmoid(const BoostedModel& model,
                                    const Matrix& features) {
  std::vector<double> out = predict_raw(model, features);
  for (double& value : out) {
    value = sigmoid(value);
  }
  return out;
}

std::vector<int> predict_determine(const BoostedModel& model,
                                   const Matrix& features) {
  std::vector<double> raw = predict_raw(model, features);
  std::vector<int> labels(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    labels[i] = raw[i] > 0.0 ? 1 : 0;  // a raw score of exactly 0 → label 0
  }
  return labels;
}

Matrix predict_two_classes(const BoostedModel& model, const Matrix& features) {
  std::vector<int> labels = predict_determine(model, features);
  Matrix out(labels.size(), 2);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out.at(i, labels[i] == 0 ? 0 : 1) = 1.0;
  }
  return out;
}

std::string serialize_model(const BoostedModel& model) {
  json doc;
  doc["format_version"] = 1;
  doc["base_score"] = model.base_score;
  doc["learning_rate_folded"] = true;
  doc["feature_count"] = model.feature_count;
  doc["loss_params"] = {{"kind", to_string(model.loss_params.kind)},
                        {"alpha", model.loss_params.alpha},
                        {"gamma", model.loss_params.gamma}};
  json trees = json::array();
  for (const Tree& tree : model.trees) {
    if (tree.nodes.empty()) {
      throw InvalidInputError("cannot serialize a tree without nodes");
    }
    trees.push_back(node_to_json(tree, 0));
  }
  doc["trees"] = std::move(trees);
  return doc.dump(2);
}

BoostedModel deserialize_model(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model parse failed: ") + e.what());
  }
  try {
    if (!doc.is_object()) {
      throw ParseError("model document must be a JSON object");
    }
    int version = doc.at("format_version").get<int>();
    if (version != 1) {
      throw ParseError("unsupported model format_version " +
                       std::to_string(version));
    }
    if (!doc.at("learning_rate_folded").get<bool>()) {
      throw ParseError("model leaf weights must store folded shrinkage");
    }
    BoostedModel model;
    model.base_score = doc.at("base_score").get<double>();
    if (!std::isfinite(model.base_score)) {
      throw ParseError("base_score must be finite");
    }
    std::int64_t feature_count = doc.at("feature_count").get<std::int64_t>();
    if (feature_count < 0) {
      throw ParseError("feature_count must be nonnegative");
    }
    model.feature_count = static_cast<std::size_t>(feature_count);
    const json& loss = doc.at("loss_params");
    model.loss_params.alpha = loss.at("alpha").get<double>();
    model.loss_params.gamma = loss.at("gamma").get<double>();
    try {
      model.loss_params.kind =
          loss_kind_from_string(loss.at("kind").get<std::string>());
      model.loss_params.validate();
    } catch (const InvalidInputError& e) {
      throw ParseError(std::string("model loss params invalid: ") + e.what());
    }
    for (const json& root : doc.at("trees")) {
      Tree tree;
      json_to_node(root, tree, model.feature_count);
      model.trees.push_back(std::move(tree));
    }
    return model;
  } catch (const json::exception& e) {
    throw ParseError(std::string("model document invalid: ") + e.what());
  }
}

void save_model(const BoostedModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw FileError("cannot open '" + path.string() + "' for writing");
  }
  out << serialize_model(model) << '\n';
  if (!out.good()) {
    throw FileError("failed while writing '" + path.string() + "'");
  }
}

BoostedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw FileError("cannot open '" + path.string() + "' for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return deserialize_model(buffer.str());
}

}  // namespace skewboost

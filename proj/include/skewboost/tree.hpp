#ifndef SKEWBOOST_TREE_HPP
#define SKEWBOOST_TREE_HPP

#include <span>
#include <vector>

namespace skewboost {

// Either a split (feature_index >= 0) or a leaf (feature_index < 0).
// Rows with feature value <= threshold go left.
struct TreeNode {
  int feature_index = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double leaf_weight = 0.0;

  bool is_leaf() const { return feature_index < 0; }
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root when non-empty

  double predict_row(std::span<const double> row) const;
};

}  // namespace skewboost

#endif  // SKEWBOOST_TREE_HPP
